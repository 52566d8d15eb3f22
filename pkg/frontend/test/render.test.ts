import assert from "node:assert/strict";
import { existsSync } from "node:fs";
import { mkdtemp, readFile } from "node:fs/promises";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { test } from "node:test";

import { FIGURE_IDS } from "../src/figures.js";
import { parseFigureCsv, SchemaError } from "../src/schema.js";
import { render, renderFigure } from "../src/render.js";
import { main } from "../src/cli.js";

// compiled tests run from dist-test/test/, the fixtures stay in test/golden/
const GOLDEN = fileURLToPath(new URL("../../test/golden/", import.meta.url));

async function golden(figure: string): Promise<string> {
  return readFile(join(GOLDEN, `${figure}.csv`), "utf8");
}

test("all 12 figure ids render from golden CSVs", async () => {
  assert.equal(FIGURE_IDS.length, 12);
  for (const figure of FIGURE_IDS) {
    const svg = renderFigure(await golden(figure), figure);
    assert.ok(svg.startsWith("<svg"), `${figure}: not an SVG`);
    assert.ok(svg.trimEnd().endsWith("</svg>"), `${figure}: truncated SVG`);
    assert.ok(svg.includes('class="curve"'), `${figure}: no curves drawn`);
  }
});

test("every curve in the CSV appears in the legend", async () => {
  for (const figure of FIGURE_IDS) {
    const text = await golden(figure);
    const data = parseFigureCsv(text, figure);
    const svg = renderFigure(text, figure);
    for (const s of data.series) {
      assert.ok(svg.includes(`>${s.curve}`), `${figure}: ${s.curve} missing from legend`);
    }
  }
});

test("Monte Carlo curves draw error bands, closed forms do not", async () => {
  for (const figure of FIGURE_IDS) {
    const text = await golden(figure);
    const data = parseFigureCsv(text, figure);
    const svg = renderFigure(text, figure);
    const bands = (svg.match(/class="band"/g) ?? []).length;
    const mcCurves = data.series.filter((s) => s.monteCarlo).length;
    assert.equal(bands, mcCurves, `${figure}: ${bands} bands for ${mcCurves} MC curves`);
  }
});

test("repeated rendering is byte-identical", async () => {
  for (const figure of ["F4_EST_ERROR", "F9_ZF_SNR", "F13_ZF_COMP"]) {
    const text = await golden(figure);
    const a = renderFigure(text, figure);
    const b = renderFigure(text, figure);
    assert.equal(a, b, `${figure}: non-deterministic output`);
  }
});

test("estimation-error figure uses a log y axis", async () => {
  const svg = renderFigure(await golden("F4_EST_ERROR"), "F4_EST_ERROR");
  // decade ticks spanning the error floor down to the high-SNR error
  for (const tick of [">1e-6<", ">0.001<", ">0.1<", ">1<"]) {
    assert.ok(svg.includes(tick), `missing log tick ${tick}`);
  }
});

test("schema violations name the offending column", async () => {
  const ok = await golden("F8_MRC_SNR");
  const noStderr = ok
    .split("\n")
    .map((l, i) => (i === 0 ? l.replace(",stderr", ",sigma") : l))
    .join("\n");
  assert.throws(() => parseFigureCsv(noStderr, "F8_MRC_SNR"),
    (err: unknown) => err instanceof SchemaError && /stderr/.test(String(err)));

  const badY = ok.replace(/^(F8_MRC_SNR,[^,]+,snr_db,[^,]+,)[^,]*/m, "$1oops");
  assert.throws(() => parseFigureCsv(badY, "F8_MRC_SNR"),
    (err: unknown) => err instanceof SchemaError && /y_value/.test(String(err)));
});

test("empty curve set raises and writes nothing", async () => {
  const dir = await mkdtemp(join(tmpdir(), "plots-"));
  const out = join(dir, "f5.svg");
  await assert.rejects(
    render({ csvPath: join(GOLDEN, "F4_EST_ERROR.csv"), figure: "F5_WEIGHTS", outPath: out }),
    (err: unknown) => err instanceof SchemaError && /no rows/.test(String(err)),
  );
  assert.equal(existsSync(out), false, "file must not be written on error");
});

test("unknown figure id is rejected with the known list", async () => {
  assert.throws(() => renderFigure("figure,curve,x_name,x_value,y_value,stderr\n", "F99"),
    /unknown figure id/);
});

test("cli renders a file and reports it", async () => {
  const dir = await mkdtemp(join(tmpdir(), "plots-cli-"));
  const out = join(dir, "f8.svg");
  const code = await main([join(GOLDEN, "F8_MRC_SNR.csv"), "--figure", "F8_MRC_SNR", "--out", out]);
  assert.equal(code, 0);
  const svg = await readFile(out, "utf8");
  assert.ok(svg.includes("</svg>"));
});

test("cli usage errors", async () => {
  assert.equal(await main([]), 2);
  assert.equal(await main(["missing.csv", "--figure", "F8_MRC_SNR", "--out", "x.svg"]), 1);
});
