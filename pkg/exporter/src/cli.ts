#!/usr/bin/env node
/** Command line for the exporter: model dir + dataset dir -> confusion/logits CSVs. */

import yargs from 'yargs';
import { hideBin } from 'yargs/helpers';
import { runExport } from './export.js';

async function main(): Promise<number> {
  const argv = await yargs(hideBin(process.argv))
    .option('model', { type: 'string', demandOption: true, describe: 'directory with model.json + weight shards' })
    .option('dataset', { type: 'string', demandOption: true, describe: 'dataset directory (one subdir per class index)' })
    .option('out-prefix', { type: 'string', demandOption: true, describe: 'output prefix for <prefix>_confusion.csv and <prefix>_logits.csv' })
    .option('batch-size', { type: 'number', default: 64, describe: 'inference batch size' })
    .option('device', { type: 'string', default: 'cpu', describe: 'device hint (cpu only in this runtime)' })
    .strict()
    .help()
    .parse();

  try {
    const result = await runExport({
      modelDir: argv.model,
      datasetDir: argv.dataset,
      outPrefix: argv['out-prefix'],
      batchSize: argv['batch-size'],
      device: argv.device,
    });
    console.log(JSON.stringify(result, null, 2));
    return 0;
  } catch (err) {
    console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
    return 1;
  }
}

main().then(code => {
  process.exitCode = code;
});
