/** Tie CSV parsing, figure styling and SVG generation together. */

import { readFile, writeFile } from "fs/promises";

import { FIGURE_IDS, FIGURE_STYLES, xLabel } from "./figures.js";
import { parseFigureCsv, SchemaError } from "./schema.js";
import { renderSvg } from "./svg.js";

export interface PlotSpec {
  csvPath: string;
  figure: string;
  outPath: string;
}

/** Render one figure id from a runner CSV into an SVG string. */
export function renderFigure(csvText: string, figure: string): string {
  const style = FIGURE_STYLES[figure];
  if (!style) {
    throw new SchemaError(
      `unknown figure id ${JSON.stringify(figure)}; known: ${FIGURE_IDS.join(", ")}`,
    );
  }
  const data = parseFigureCsv(csvText, figure);
  return renderSvg(data.series, {
    title: style.title,
    xLabel: xLabel(data.xName),
    yLabel: style.yLabel,
    logY: style.logY,
  });
}

/** Render to file; nothing is written when parsing or validation fails. */
export async function render(spec: PlotSpec): Promise<string> {
  const text = await readFile(spec.csvPath, "utf8");
  const svg = renderFigure(text, spec.figure);
  await writeFile(spec.outPath, svg, "utf8");
  return spec.outPath;
}
