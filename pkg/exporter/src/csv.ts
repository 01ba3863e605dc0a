/**
 * CSV writers and validators matching the taskrd interchange schemas:
 * UTF-8, comma-delimited, LF line endings, '#' comment lines.
 */

import * as fs from 'fs';
import * as path from 'path';

function atomicWrite(filePath: string, body: string): void {
  const tmp = path.join(path.dirname(filePath), `.${path.basename(filePath)}.${process.pid}.tmp`);
  fs.writeFileSync(tmp, body, { encoding: 'utf-8' });
  fs.renameSync(tmp, filePath);
}

function dataLines(filePath: string): string[] {
  const text = fs.readFileSync(filePath, 'utf-8');
  return text
    .split('\n')
    .map(line => line.trim())
    .filter(line => line.length > 0 && !line.startsWith('#'));
}

/** Write a square integer count matrix (rows = true class, cols = predicted class). */
export function writeConfusionCountsCsv(counts: number[][], filePath: string): void {
  const n = counts.length;
  for (const row of counts) {
    if (row.length !== n) throw new Error('confusion counts must be square');
    for (const v of row) {
      if (!Number.isInteger(v) || v < 0) throw new Error(`confusion counts must be nonnegative integers, got ${v}`);
    }
  }
  atomicWrite(filePath, counts.map(row => row.join(',')).join('\n') + '\n');
}

/** Write a logits dataset: header label,l0,...,l{K-1}, one record per line, 0-based labels. */
export function writeLogitsCsv(labels: number[], logits: number[][], filePath: string): void {
  if (labels.length !== logits.length) throw new Error('labels and logits must have the same length');
  if (labels.length < 2) throw new Error('dataset needs at least 2 records');
  const k = logits[0].length;
  const header = 'label,' + Array.from({ length: k }, (_, j) => `l${j}`).join(',');
  const lines = [header];
  for (let i = 0; i < labels.length; i++) {
    const label = labels[i];
    if (!Number.isInteger(label) || label < 0 || label >= k) {
      throw new Error(`record ${i}: label ${label} outside [0, ${k - 1}]`);
    }
    const row = logits[i];
    if (row.length !== k) throw new Error(`record ${i}: expected ${k} logits, got ${row.length}`);
    for (const v of row) {
      if (!Number.isFinite(v)) throw new Error(`record ${i}: non-finite logit`);
    }
    // String(Number) is the shortest exact round-trip decimal form
    lines.push(`${label},${row.map(v => String(v)).join(',')}`);
  }
  atomicWrite(filePath, lines.join('\n') + '\n');
}

/** Parse and validate a confusion counts CSV; returns the count matrix. */
export function readConfusionCountsCsv(filePath: string): number[][] {
  const rows = dataLines(filePath).map(line => line.split(',').map(cell => Number(cell)));
  const n = rows.length;
  for (const [i, row] of rows.entries()) {
    if (row.length !== n) throw new Error(`${filePath}: row ${i} has ${row.length} cells, expected ${n}`);
    for (const v of row) {
      if (!Number.isFinite(v) || v < 0) throw new Error(`${filePath}: row ${i}: invalid count ${v}`);
    }
    if (row.reduce((a, b) => a + b, 0) === 0) throw new Error(`${filePath}: row ${i} is all zeros`);
  }
  return rows;
}

/** Parse and validate a logits CSV; returns labels and logits. */
export function readLogitsCsv(filePath: string): { labels: number[]; logits: number[][] } {
  const lines = dataLines(filePath);
  const header = lines[0].split(',');
  if (header[0] !== 'label' || header.length < 2) {
    throw new Error(`${filePath}: header must be 'label,l0,l1,...'`);
  }
  const k = header.length - 1;
  for (let j = 0; j < k; j++) {
    if (header[j + 1] !== `l${j}`) throw new Error(`${filePath}: logit columns must be l0..l${k - 1} in order`);
  }
  const labels: number[] = [];
  const logits: number[][] = [];
  for (const [i, line] of lines.slice(1).entries()) {
    const cells = line.split(',');
    if (cells.length !== k + 1) throw new Error(`${filePath}: record ${i}: expected ${k + 1} cells`);
    const label = Number(cells[0]);
    if (!Number.isInteger(label) || label < 0 || label >= k) {
      throw new Error(`${filePath}: record ${i}: label ${cells[0]} outside [0, ${k - 1}]`);
    }
    const row = cells.slice(1).map(Number);
    for (const [j, v] of row.entries()) {
      if (!Number.isFinite(v)) throw new Error(`${filePath}: record ${i}, column l${j}: non-finite value`);
    }
    labels.push(label);
    logits.push(row);
  }
  if (labels.length < 2) throw new Error(`${filePath}: dataset needs at least 2 records`);
  return { labels, logits };
}
