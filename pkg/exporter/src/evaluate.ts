/**
 * Batched model evaluation: pre-softmax logits per sample plus hard-decision
 * confusion counts.
 */

import * as tf from '@tensorflow/tfjs';
import { LabeledDataset } from './dataset.js';

export interface EvaluationResult {
  labels: number[];
  logits: number[][];
  counts: number[][]; // counts[true][predicted]
  accuracy: number;
  dTm: number; // 1 - accuracy, the task-model error floor
}

function looksLikeProbabilities(rows: number[][]): boolean {
  return rows.every(row => {
    const sum = row.reduce((a, b) => a + b, 0);
    return Math.abs(sum - 1) < 1e-3 && row.every(v => v >= 0 && v <= 1);
  });
}

export async function evaluateModel(
  model: tf.LayersModel,
  dataset: LabeledDataset,
  batchSize: number,
): Promise<EvaluationResult> {
  if (batchSize < 1) throw new Error(`batch size must be >= 1, got ${batchSize}`);
  const inputShape = model.inputs[0].shape.slice(1).map(d => (d === null ? -1 : (d as number)));
  const inputSize = inputShape.reduce((a, b) => a * Math.abs(b), 1);
  const outputUnits = model.outputs[0].shape[1];
  if (outputUnits !== dataset.numClasses) {
    throw new Error(`model emits ${outputUnits} classes but the dataset has ${dataset.numClasses}`);
  }

  const k = dataset.numClasses;
  const labels: number[] = [];
  const logits: number[][] = [];
  const counts = Array.from({ length: k }, () => new Array<number>(k).fill(0));
  let correct = 0;

  for (let start = 0; start < dataset.samples.length; start += batchSize) {
    const batch = dataset.samples.slice(start, start + batchSize);
    for (const sample of batch) {
      if (sample.values.length !== inputSize) {
        throw new Error(`sample has ${sample.values.length} values, model expects ${inputSize}`);
      }
    }
    const out = tf.tidy(() => {
      const x = tf.tensor2d(
        batch.map(s => Array.from(s.values)),
        [batch.length, inputSize],
      ).reshape([batch.length, ...inputShape]);
      return model.predict(x) as tf.Tensor2D;
    });
    const rows = (await out.array()) as number[][];
    out.dispose();
    for (let i = 0; i < batch.length; i++) {
      const label = batch[i].label;
      const row = rows[i];
      let pred = 0;
      for (let j = 1; j < k; j++) if (row[j] > row[pred]) pred = j;
      labels.push(label);
      logits.push(row);
      counts[label][pred] += 1;
      if (pred === label) correct += 1;
    }
  }

  if (looksLikeProbabilities(logits)) {
    console.warn(
      'warning: model outputs look like softmax probabilities; export expects raw pre-softmax logits (use a linear final layer)',
    );
  }

  const accuracy = correct / labels.length;
  return { labels, logits, counts, accuracy, dTm: 1 - accuracy };
}
