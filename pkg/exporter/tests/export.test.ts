import { spawnSync } from 'child_process';
import * as fs from 'fs';
import * as os from 'os';
import * as path from 'path';
import * as tf from '@tensorflow/tfjs';
import { beforeAll, describe, expect, it } from 'vitest';

import { readConfusionCountsCsv, readLogitsCsv } from '../src/csv.js';
import { runExport, ExportResult } from '../src/export.js';
import { loadModelFromDir, saveModelToDir } from '../src/model.js';

const NUM_CLASSES = 3;
const FEATURE_DIM = 4;
const SAMPLES_PER_CLASS = 40;

/** Deterministic 32-bit PRNG so the fixture model and dataset never change. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function gaussian(rand: () => number): number {
  // Box-Muller on two uniforms
  const u = Math.max(rand(), 1e-12);
  const v = rand();
  return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * v);
}

function buildModel(): tf.LayersModel {
  const model = tf.sequential();
  model.add(tf.layers.dense({ units: NUM_CLASSES, inputShape: [FEATURE_DIM], activation: 'linear' }));
  // feature j votes for class j; the shared fourth feature is class-neutral
  const kernel = tf.tensor2d([
    [2, 0, 0],
    [0, 2, 0],
    [0, 0, 2],
    [0.3, 0.3, 0.3],
  ]);
  const bias = tf.tensor1d([0.1, 0.0, -0.1]);
  model.setWeights([kernel, bias]);
  return model;
}

function writeDataset(dir: string, rand: () => number): void {
  for (let label = 0; label < NUM_CLASSES; label++) {
    const classDir = path.join(dir, String(label));
    fs.mkdirSync(classDir, { recursive: true });
    for (let i = 0; i < SAMPLES_PER_CLASS; i++) {
      const values = Array.from({ length: FEATURE_DIM }, (_, j) => {
        const mean = j === label ? 2.0 : 0.0;
        return mean + 1.4 * gaussian(rand);
      });
      fs.writeFileSync(path.join(classDir, `s${String(i).padStart(3, '0')}.json`), JSON.stringify(values));
    }
  }
}

function softmaxArgmax(row: number[]): number {
  const m = Math.max(...row);
  const probs = row.map(v => Math.exp(v - m));
  const z = probs.reduce((a, b) => a + b, 0);
  let best = 0;
  for (let j = 1; j < probs.length; j++) {
    if (probs[j] / z > probs[best] / z) best = j;
  }
  return best;
}

let work: string;
let result: ExportResult;

beforeAll(async () => {
  work = fs.mkdtempSync(path.join(os.tmpdir(), 'taskrd-export-'));
  const modelDir = path.join(work, 'model');
  const datasetDir = path.join(work, 'dataset');
  fs.mkdirSync(datasetDir);
  await saveModelToDir(buildModel(), modelDir);
  writeDataset(datasetDir, mulberry32(2024));
  result = await runExport({
    modelDir,
    datasetDir,
    outPrefix: path.join(work, 'run'),
    batchSize: 32,
  });
});

describe('model round trip', () => {
  it('reloads with identical predictions', async () => {
    const reloaded = await loadModelFromDir(path.join(work, 'model'));
    const x = tf.tensor2d([[1, 0, 0, 1]]);
    const fresh = buildModel().predict(x) as tf.Tensor;
    const loaded = reloaded.predict(x) as tf.Tensor;
    expect(await loaded.data()).toEqual(await fresh.data());
  });
});

describe('export job', () => {
  it('writes schema-valid files', () => {
    const counts = readConfusionCountsCsv(result.confusionPath);
    expect(counts.length).toBe(NUM_CLASSES);
    const total = counts.flat().reduce((a, b) => a + b, 0);
    expect(total).toBe(NUM_CLASSES * SAMPLES_PER_CLASS);

    const { labels, logits } = readLogitsCsv(result.logitsPath);
    expect(labels.length).toBe(NUM_CLASSES * SAMPLES_PER_CLASS);
    expect(logits[0].length).toBe(NUM_CLASSES);
  });

  it('softmax+argmax over the logits file reproduces the confusion counts exactly', () => {
    const counts = readConfusionCountsCsv(result.confusionPath);
    const { labels, logits } = readLogitsCsv(result.logitsPath);
    const recomputed = Array.from({ length: NUM_CLASSES }, () => new Array<number>(NUM_CLASSES).fill(0));
    for (let i = 0; i < labels.length; i++) {
      recomputed[labels[i]][softmaxArgmax(logits[i])] += 1;
    }
    expect(recomputed).toEqual(counts);
  });

  it('summary error floor agrees with the confusion trace', () => {
    const counts = readConfusionCountsCsv(result.confusionPath);
    const total = counts.flat().reduce((a, b) => a + b, 0);
    const trace = counts.reduce((a, row, i) => a + row[i], 0);
    expect(result.summary.dTm).toBeCloseTo(1 - trace / total, 12);
    expect(result.summary.dTm).toBeCloseTo(1 - result.summary.accuracy, 15);
    // the fixture classifier is good but imperfect
    expect(result.summary.dTm).toBeGreaterThan(0);
    expect(result.summary.dTm).toBeLessThan(0.5);
  });

  it('ingesting the confusion csv through the main tool reproduces the error floor', () => {
    const mergeOut = path.join(work, 'merge.csv');
    const run = spawnSync(
      'python3',
      ['-m', 'taskrd.cli', 'class-bounds', '--confusion', result.confusionPath, '--methods', 'merge', '--k', '0', '--out', mergeOut],
      { encoding: 'utf-8' },
    );
    expect(run.status, run.stderr).toBe(0);
    const lines = fs.readFileSync(mergeOut, 'utf-8').trim().split('\n');
    expect(lines[0]).toBe('method,lambda,rate_bits,distortion,bpp,flags');
    const cells = lines[1].split(',');
    expect(cells[0]).toBe('merge');
    expect(cells[5]).toBe('k=0');
    const ingestedFloor = Number(cells[3]);
    expect(Math.abs(ingestedFloor - result.summary.dTm)).toBeLessThanOrEqual(1e-9);
  });

  it('skips unreadable samples and reports the count', async () => {
    const datasetDir = path.join(work, 'dataset-corrupt');
    fs.mkdirSync(datasetDir, { recursive: true });
    writeDataset(datasetDir, mulberry32(7));
    fs.writeFileSync(path.join(datasetDir, '0', 'zz-bad.json'), 'not json');
    fs.writeFileSync(path.join(datasetDir, '1', 'zz-bad.json'), JSON.stringify(['strings']));
    const out = await runExport({
      modelDir: path.join(work, 'model'),
      datasetDir,
      outPrefix: path.join(work, 'corrupt'),
    });
    expect(out.summary.skipped).toBe(2);
    expect(out.summary.samples).toBe(NUM_CLASSES * SAMPLES_PER_CLASS);
  });

  it('rejects a dataset whose class count differs from the model', async () => {
    const datasetDir = path.join(work, 'dataset-two');
    for (const label of [0, 1]) {
      const classDir = path.join(datasetDir, String(label));
      fs.mkdirSync(classDir, { recursive: true });
      fs.writeFileSync(path.join(classDir, 'a.json'), JSON.stringify([1, 0, 0, 0]));
    }
    await expect(
      runExport({ modelDir: path.join(work, 'model'), datasetDir, outPrefix: path.join(work, 'two') }),
    ).rejects.toThrow(/classes/);
  });
});
