/**
 * CSV schema of the figure runner: one row per (curve, x-point) with columns
 *   figure, curve, x_name, x_value, y_value, stderr
 * where stderr is empty for closed-form points and numeric for Monte Carlo.
 */
export const CSV_COLUMNS = [
    "figure",
    "curve",
    "x_name",
    "x_value",
    "y_value",
    "stderr",
];
export class SchemaError extends Error {
    column;
    constructor(message, column) {
        super(column ? `${message} (column: ${column})` : message);
        this.column = column;
        this.name = "SchemaError";
    }
}
/** Split one CSV line; the runner never quotes fields, so commas suffice. */
function splitLine(line) {
    return line.split(",").map((f) => f.trim());
}
function parseNumber(raw, column, line) {
    const value = Number(raw);
    if (raw === "" || !Number.isFinite(value)) {
        throw new SchemaError(`line ${line}: ${JSON.stringify(raw)} is not a finite number`, column);
    }
    return value;
}
/** Parse the runner's CSV and extract every curve of one figure id. */
export function parseFigureCsv(text, figure) {
    const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
    if (lines.length === 0) {
        throw new SchemaError("CSV file is empty");
    }
    const header = splitLine(lines[0]);
    for (const column of CSV_COLUMNS) {
        if (!header.includes(column)) {
            throw new SchemaError("missing required column", column);
        }
    }
    for (const column of header) {
        if (!CSV_COLUMNS.includes(column)) {
            throw new SchemaError("unexpected column", column);
        }
    }
    const idx = Object.fromEntries(header.map((c, i) => [c, i]));
    const order = [];
    const byCurve = new Map();
    let xName = null;
    for (let i = 1; i < lines.length; i++) {
        const fields = splitLine(lines[i]);
        if (fields.length !== header.length) {
            throw new SchemaError(`line ${i + 1}: expected ${header.length} fields, got ${fields.length}`);
        }
        if (fields[idx.figure] !== figure)
            continue;
        const curve = fields[idx.curve];
        if (curve === "") {
            throw new SchemaError(`line ${i + 1}: empty curve name`, "curve");
        }
        const x = parseNumber(fields[idx.x_value], "x_value", i + 1);
        const y = parseNumber(fields[idx.y_value], "y_value", i + 1);
        const rawErr = fields[idx.stderr];
        const stderr = rawErr === "" ? null : parseNumber(rawErr, "stderr", i + 1);
        if (xName === null) {
            xName = fields[idx.x_name];
        }
        else if (fields[idx.x_name] !== xName) {
            throw new SchemaError(`line ${i + 1}: mixed x_name values (${fields[idx.x_name]} vs ${xName})`, "x_name");
        }
        let series = byCurve.get(curve);
        if (!series) {
            series = { curve, points: [], monteCarlo: false };
            byCurve.set(curve, series);
            order.push(curve);
        }
        series.points.push({ x, y, stderr });
        if (stderr !== null)
            series.monteCarlo = true;
    }
    if (order.length === 0) {
        throw new SchemaError(`no rows for figure ${JSON.stringify(figure)}`);
    }
    const series = order.map((curve) => {
        const s = byCurve.get(curve);
        s.points.sort((a, b) => a.x - b.x);
        return s;
    });
    return { figure, xName: xName, series };
}
