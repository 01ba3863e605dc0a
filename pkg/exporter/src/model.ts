/**
 * Load and save tfjs layers models from a plain directory (model.json plus
 * binary weight shards), without the native tfjs-node file handlers.
 */

import * as fs from 'fs';
import * as path from 'path';
import * as tf from '@tensorflow/tfjs';

interface WeightsManifestGroup {
  paths: string[];
  weights: tf.io.WeightsManifestEntry[];
}

/** Load a layers model from a directory containing model.json and its weight shards. */
export async function loadModelFromDir(dir: string): Promise<tf.LayersModel> {
  const jsonPath = path.join(dir, 'model.json');
  if (!fs.existsSync(jsonPath)) throw new Error(`no model.json under ${dir}`);
  const manifest = JSON.parse(fs.readFileSync(jsonPath, 'utf-8'));
  if (!manifest.modelTopology || !manifest.weightsManifest) {
    throw new Error(`${jsonPath}: expected a tfjs layers-model manifest`);
  }
  const groups = manifest.weightsManifest as WeightsManifestGroup[];
  const shards: ArrayBuffer[] = [];
  const weightSpecs: tf.io.WeightsManifestEntry[] = [];
  for (const group of groups) {
    weightSpecs.push(...group.weights);
    for (const shard of group.paths) {
      const buf = fs.readFileSync(path.join(dir, shard));
      shards.push(buf.buffer.slice(buf.byteOffset, buf.byteOffset + buf.byteLength));
    }
  }
  return tf.loadLayersModel(
    tf.io.fromMemory({
      modelTopology: manifest.modelTopology,
      weightSpecs,
      weightData: tf.io.concatenateArrayBuffers(shards),
    }),
  );
}

/** Save a layers model into a directory as model.json plus a single weights.bin shard. */
export async function saveModelToDir(model: tf.LayersModel, dir: string): Promise<void> {
  fs.mkdirSync(dir, { recursive: true });
  await model.save(
    tf.io.withSaveHandler(async artifacts => {
      const weightData = Array.isArray(artifacts.weightData)
        ? tf.io.concatenateArrayBuffers(artifacts.weightData as ArrayBuffer[])
        : (artifacts.weightData as ArrayBuffer);
      const manifest = {
        modelTopology: artifacts.modelTopology,
        format: 'layers-model',
        generatedBy: 'taskrd-exporter',
        convertedBy: null,
        weightsManifest: [{ paths: ['weights.bin'], weights: artifacts.weightSpecs }],
      };
      fs.writeFileSync(path.join(dir, 'model.json'), JSON.stringify(manifest));
      fs.writeFileSync(path.join(dir, 'weights.bin'), Buffer.from(weightData));
      return {
        modelArtifactsInfo: {
          dateSaved: new Date(),
          modelTopologyType: 'JSON' as const,
        },
      };
    }),
  );
}
