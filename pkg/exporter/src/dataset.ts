/**
 * Labeled-sample directory loader.
 *
 * Layout: one subdirectory per class, named by the 0-based class index
 * (consecutive 0..K-1); each sample is a .json file holding a numeric array
 * (flat or nested). Samples that fail to parse are skipped and reported.
 */

import * as fs from 'fs';
import * as path from 'path';

export interface Sample {
  label: number;
  values: Float32Array; // flattened feature values
}

export interface LabeledDataset {
  samples: Sample[];
  numClasses: number;
  skipped: string[]; // paths of unreadable samples
}

function flatten(node: unknown, out: number[]): void {
  if (Array.isArray(node)) {
    for (const child of node) flatten(child, out);
    return;
  }
  if (typeof node !== 'number' || !Number.isFinite(node)) {
    throw new Error('sample must contain only finite numbers');
  }
  out.push(node);
}

export function loadDataset(dir: string): LabeledDataset {
  if (!fs.existsSync(dir)) throw new Error(`dataset directory not found: ${dir}`);
  const classDirs = fs
    .readdirSync(dir, { withFileTypes: true })
    .filter(e => e.isDirectory() && /^\d+$/.test(e.name))
    .map(e => Number(e.name))
    .sort((a, b) => a - b);
  if (classDirs.length < 2) throw new Error(`${dir}: need at least 2 class subdirectories named 0..K-1`);
  classDirs.forEach((c, i) => {
    if (c !== i) throw new Error(`${dir}: class directories must be consecutive 0..K-1, missing ${i}`);
  });

  const samples: Sample[] = [];
  const skipped: string[] = [];
  for (const label of classDirs) {
    const classPath = path.join(dir, String(label));
    const files = fs
      .readdirSync(classPath)
      .filter(name => name.endsWith('.json'))
      .sort();
    for (const name of files) {
      const samplePath = path.join(classPath, name);
      try {
        const values: number[] = [];
        flatten(JSON.parse(fs.readFileSync(samplePath, 'utf-8')), values);
        if (values.length === 0) throw new Error('empty sample');
        samples.push({ label, values: Float32Array.from(values) });
      } catch {
        skipped.push(samplePath);
      }
    }
  }
  if (samples.length === 0) throw new Error(`${dir}: no readable samples`);
  return { samples, numClasses: classDirs.length, skipped };
}
