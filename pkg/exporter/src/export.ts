/**
 * End-to-end export job: model directory + dataset directory in, confusion and
 * logits CSVs out, in the exact taskrd interchange schemas.
 */

import { writeConfusionCountsCsv, writeLogitsCsv } from './csv.js';
import { loadDataset } from './dataset.js';
import { evaluateModel } from './evaluate.js';
import { loadModelFromDir } from './model.js';

export interface ExportJob {
  modelDir: string;
  datasetDir: string;
  outPrefix: string;
  batchSize?: number;
  device?: string; // hint only; this runtime is CPU-bound
}

export interface ExportSummary {
  samples: number;
  skipped: number;
  accuracy: number;
  dTm: number;
  numClasses: number;
}

export interface ExportResult {
  confusionPath: string;
  logitsPath: string;
  summary: ExportSummary;
}

export async function runExport(job: ExportJob): Promise<ExportResult> {
  if (job.device && job.device !== 'cpu') {
    console.warn(`warning: device hint '${job.device}' ignored; running on cpu`);
  }
  const model = await loadModelFromDir(job.modelDir);
  const dataset = loadDataset(job.datasetDir);
  const result = await evaluateModel(model, dataset, job.batchSize ?? 64);

  const confusionPath = `${job.outPrefix}_confusion.csv`;
  const logitsPath = `${job.outPrefix}_logits.csv`;
  writeConfusionCountsCsv(result.counts, confusionPath);
  writeLogitsCsv(result.labels, result.logits, logitsPath);

  return {
    confusionPath,
    logitsPath,
    summary: {
      samples: result.labels.length,
      skipped: dataset.skipped.length,
      accuracy: result.accuracy,
      dTm: result.dTm,
      numClasses: dataset.numClasses,
    },
  };
}
