#!/usr/bin/env node
import yargs from "yargs";

import { kindNames, renderFile } from "./render";

export function main(argv: string[]): number {
  let args;
  try {
    args = yargs(argv)
      .command("render", "render one experiment CSV to an SVG figure", (y) =>
        y
          .option("kind", {
            type: "string",
            demandOption: true,
            describe: `figure kind: ${kindNames().join(", ")}`,
          })
          .option("in", { type: "string", demandOption: true, describe: "input CSV path" })
          .option("out", { type: "string", demandOption: true, describe: "output SVG path" }),
      )
      .demandCommand(1)
      .strict()
      .exitProcess(false)
      .fail((msg, err) => {
        throw err ?? new Error(msg);
      })
      .parseSync();
  } catch (e) {
    process.stderr.write(`${(e as Error).message}\n`);
    return 1;
  }

  if (args._[0] !== "render") {
    process.stderr.write(`unknown command "${args._[0]}"\n`);
    return 1;
  }
  try {
    renderFile(args.kind as string, args.in as string, args.out as string);
  } catch (e) {
    process.stderr.write(`error: ${(e as Error).message}\n`);
    return 1;
  }
  process.stdout.write(`wrote ${args.out}\n`);
  return 0;
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
