#!/usr/bin/env node
/**
 * figgen <recipe> --data <dir> --out <file.svg> [--log]
 *
 * Renders one figure from the simulation CLI's CSV artifacts. Display only:
 * no physics is recomputed here. Fails (nonzero exit, no file written) on
 * missing inputs, missing columns, or empty CSVs.
 */

import { writeFileSync } from 'fs';

import { CsvError } from './csv.js';
import { RECIPES, render } from './recipes.js';

function usage(): string {
  return `usage: figgen <recipe> --data <dir> --out <file.svg> [--log]\nrecipes: ${Object.keys(
    RECIPES,
  ).join(', ')}`;
}

export function main(argv: string[]): number {
  const args = argv.slice(2);
  let recipe = '';
  let dataDir = '';
  let outPath = '';
  let log = false;
  for (let i = 0; i < args.length; i++) {
    const a = args[i];
    if (a === '--data') dataDir = args[++i] ?? '';
    else if (a === '--out') outPath = args[++i] ?? '';
    else if (a === '--log') log = true;
    else if (a === '--help' || a === '-h') {
      console.log(usage());
      return 0;
    } else if (!a.startsWith('-') && !recipe) recipe = a;
    else {
      console.error(`unknown argument: ${a}\n${usage()}`);
      return 2;
    }
  }
  if (!recipe || !dataDir || !outPath) {
    console.error(usage());
    return 2;
  }
  try {
    const svg = render(recipe, dataDir, { log });
    writeFileSync(outPath, svg);
    console.log(`wrote ${outPath}`);
    return 0;
  } catch (err) {
    if (err instanceof CsvError) {
      console.error(`error: ${err.message}`);
      return 1;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split('/').pop()!);
if (invokedDirectly) {
  process.exit(main(process.argv));
}
