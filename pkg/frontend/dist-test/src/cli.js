#!/usr/bin/env node
/**
 * Render a figure CSV produced by the `mixedadc run` command as an SVG.
 *
 * Usage:
 *   mixedadc-plot <csv> --figure F8_MRC_SNR --out f8.svg
 */
import { FIGURE_IDS } from "./figures.js";
import { render } from "./render.js";
function usage() {
    return [
        "usage: mixedadc-plot <csv> --figure <id> --out <path>",
        "",
        `figure ids: ${FIGURE_IDS.join(", ")}`,
    ].join("\n");
}
export function parseArgs(argv) {
    let csv = null;
    let figure = null;
    let out = null;
    for (let i = 0; i < argv.length; i++) {
        const arg = argv[i];
        if (arg === "--figure")
            figure = argv[++i] ?? null;
        else if (arg === "--out")
            out = argv[++i] ?? null;
        else if (arg === "-h" || arg === "--help")
            throw new UsageError(usage(), 0);
        else if (arg.startsWith("-"))
            throw new UsageError(`unknown option ${arg}\n${usage()}`);
        else if (csv === null)
            csv = arg;
        else
            throw new UsageError(`unexpected argument ${arg}\n${usage()}`);
    }
    if (!csv || !figure || !out)
        throw new UsageError(usage());
    return { csv, figure, out };
}
export class UsageError extends Error {
    code;
    constructor(message, code = 2) {
        super(message);
        this.code = code;
    }
}
export async function main(argv) {
    let args;
    try {
        args = parseArgs(argv);
    }
    catch (err) {
        if (err instanceof UsageError) {
            (err.code === 0 ? console.log : console.error)(err.message);
            return err.code;
        }
        throw err;
    }
    try {
        const path = await render({ csvPath: args.csv, figure: args.figure, outPath: args.out });
        console.log(`wrote ${path}`);
        return 0;
    }
    catch (err) {
        console.error(`error: ${err instanceof Error ? err.message : String(err)}`);
        return 1;
    }
}
const invokedDirectly = process.argv[1] !== undefined &&
    import.meta.url === new URL(`file://${process.argv[1]}`).href;
if (invokedDirectly) {
    main(process.argv.slice(2)).then((code) => {
        process.exitCode = code;
    });
}
