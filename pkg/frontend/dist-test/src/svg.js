/**
 * Minimal deterministic SVG line-plot builder.
 *
 * No timestamps, no randomness, fixed number formatting: equal inputs give
 * byte-identical output. Monte Carlo series draw a shaded 95% band from
 * their standard errors behind the line.
 */
// ── layout constants ────────────────────────────────────────────────
export const WIDTH = 960;
export const HEIGHT = 540;
const MARGIN = { top: 48, right: 300, bottom: 64, left: 76 };
const PLOT_W = WIDTH - MARGIN.left - MARGIN.right;
const PLOT_H = HEIGHT - MARGIN.top - MARGIN.bottom;
const PALETTE = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
    "#e377c2", "#17becf", "#bcbd22", "#7f7f7f", "#000000", "#66c2a5",
    "#aa3377", "#4477aa", "#228833", "#ccbb44",
];
const DASHES = ["", "8 4", "2 3", "8 4 2 4"];
const BAND_Z = 1.96; // 95% interval half-width in standard errors
// ── helpers ─────────────────────────────────────────────────────────
/** Fixed-precision coordinate formatting keeps the output reproducible. */
function fmt(v) {
    const s = v.toFixed(2);
    return s === "-0.00" ? "0.00" : s;
}
function fmtTick(v) {
    if (v === 0)
        return "0";
    const a = Math.abs(v);
    if (a >= 1e4 || a < 1e-3)
        return v.toExponential(0).replace("+", "");
    const s = v.toPrecision(4);
    return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
}
function esc(text) {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
/** Round ticks covering [lo, hi] at a step of 1, 2 or 5 times a power of 10. */
function linearTicks(lo, hi, target = 6) {
    if (lo === hi) {
        hi = lo + (lo === 0 ? 1 : Math.abs(lo) * 0.5);
        lo = lo - (lo === 0 ? 1 : Math.abs(lo) * 0.5);
    }
    const span = hi - lo;
    const raw = span / target;
    const mag = Math.pow(10, Math.floor(Math.log10(raw)));
    const step = [1, 2, 5, 10].map((m) => m * mag).find((s) => span / s <= target) ?? 10 * mag;
    const ticks = [];
    for (let v = Math.ceil(lo / step) * step; v <= hi + 1e-12 * span; v += step) {
        ticks.push(Math.abs(v) < 1e-12 * span ? 0 : v);
    }
    return ticks;
}
function decadeTicks(lo, hi) {
    const ticks = [];
    for (let e = Math.floor(Math.log10(lo)); e <= Math.ceil(Math.log10(hi)); e++) {
        ticks.push(Math.pow(10, e));
    }
    return ticks;
}
export function renderSvg(series, opts) {
    const xs = series.flatMap((s) => s.points.map((p) => p.x));
    const ysWithBand = series.flatMap((s) => s.points.flatMap((p) => {
        const e = p.stderr ?? 0;
        return [p.y - BAND_Z * e, p.y + BAND_Z * e];
    }));
    const xLo = Math.min(...xs);
    const xHi = Math.max(...xs);
    let yLo = Math.min(...ysWithBand);
    let yHi = Math.max(...ysWithBand);
    if (opts.logY) {
        const positives = ysWithBand.filter((y) => y > 0);
        yLo = Math.min(...positives);
        yHi = Math.max(...positives);
    }
    const xTicks = linearTicks(xLo, xHi);
    const yTicks = opts.logY ? decadeTicks(yLo, yHi) : linearTicks(yLo, yHi);
    if (!opts.logY) {
        yLo = Math.min(yLo, yTicks[0]);
        yHi = Math.max(yHi, yTicks[yTicks.length - 1]);
    }
    else {
        yLo = Math.min(yLo, yTicks[0]);
        yHi = Math.max(yHi, yTicks[yTicks.length - 1]);
    }
    const sx = (x) => MARGIN.left + (xHi === xLo ? 0.5 : (x - xLo) / (xHi - xLo)) * PLOT_W;
    const syLin = (y) => MARGIN.top + (1 - (y - yLo) / (yHi - yLo)) * PLOT_H;
    const syLog = (y) => MARGIN.top + (1 - (Math.log10(y) - Math.log10(yLo)) / (Math.log10(yHi) - Math.log10(yLo))) * PLOT_H;
    const sy = opts.logY ? syLog : syLin;
    const clampY = (y) => (opts.logY && y <= 0 ? yLo : y);
    const parts = [];
    parts.push(`<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
        `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`);
    parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
    parts.push(`<text x="${fmt(MARGIN.left + PLOT_W / 2)}" y="28" text-anchor="middle" ` +
        `font-size="18" fill="#111">${esc(opts.title)}</text>`);
    // gridlines and axes
    for (const t of xTicks) {
        const x = fmt(sx(t));
        parts.push(`<line x1="${x}" y1="${fmt(MARGIN.top)}" x2="${x}" y2="${fmt(MARGIN.top + PLOT_H)}" ` +
            `stroke="#dddddd" stroke-width="1"/>`);
        parts.push(`<text x="${x}" y="${fmt(MARGIN.top + PLOT_H + 20)}" text-anchor="middle" ` +
            `font-size="12" fill="#333">${esc(fmtTick(t))}</text>`);
    }
    for (const t of yTicks) {
        const y = fmt(sy(t));
        parts.push(`<line x1="${fmt(MARGIN.left)}" y1="${y}" x2="${fmt(MARGIN.left + PLOT_W)}" y2="${y}" ` +
            `stroke="#dddddd" stroke-width="1"/>`);
        parts.push(`<text x="${fmt(MARGIN.left - 8)}" y="${fmt(sy(t) + 4)}" text-anchor="end" ` +
            `font-size="12" fill="#333">${esc(fmtTick(t))}</text>`);
    }
    parts.push(`<rect x="${fmt(MARGIN.left)}" y="${fmt(MARGIN.top)}" width="${fmt(PLOT_W)}" ` +
        `height="${fmt(PLOT_H)}" fill="none" stroke="#333" stroke-width="1"/>`);
    parts.push(`<text x="${fmt(MARGIN.left + PLOT_W / 2)}" y="${HEIGHT - 18}" text-anchor="middle" ` +
        `font-size="14" fill="#111">${esc(opts.xLabel)}</text>`);
    parts.push(`<text x="22" y="${fmt(MARGIN.top + PLOT_H / 2)}" text-anchor="middle" font-size="14" ` +
        `fill="#111" transform="rotate(-90 22 ${fmt(MARGIN.top + PLOT_H / 2)})">${esc(opts.yLabel)}</text>`);
    // error bands first so every line stays visible
    series.forEach((s, i) => {
        if (!s.monteCarlo)
            return;
        const color = PALETTE[i % PALETTE.length];
        const upper = s.points.map((p) => `${fmt(sx(p.x))},${fmt(sy(clampY(p.y + BAND_Z * (p.stderr ?? 0))))}`);
        const lower = s.points
            .slice()
            .reverse()
            .map((p) => `${fmt(sx(p.x))},${fmt(sy(clampY(p.y - BAND_Z * (p.stderr ?? 0))))}`);
        parts.push(`<polygon class="band" points="${upper.join(" ")} ${lower.join(" ")}" ` +
            `fill="${color}" fill-opacity="0.15" stroke="none"/>`);
    });
    // curves
    series.forEach((s, i) => {
        const color = PALETTE[i % PALETTE.length];
        const dash = DASHES[Math.floor(i / PALETTE.length) % DASHES.length];
        const pts = s.points.map((p) => `${fmt(sx(p.x))},${fmt(sy(clampY(p.y)))}`).join(" ");
        const dashAttr = dash ? ` stroke-dasharray="${dash}"` : "";
        parts.push(`<polyline class="curve" points="${pts}" fill="none" stroke="${color}" ` +
            `stroke-width="2"${dashAttr}/>`);
        for (const p of s.points) {
            parts.push(`<circle cx="${fmt(sx(p.x))}" cy="${fmt(sy(clampY(p.y)))}" r="2.5" fill="${color}"/>`);
        }
    });
    // legend: every curve, in CSV order
    const legendX = MARGIN.left + PLOT_W + 16;
    series.forEach((s, i) => {
        const color = PALETTE[i % PALETTE.length];
        const y = MARGIN.top + 10 + i * 20;
        parts.push(`<line x1="${legendX}" y1="${y}" x2="${legendX + 22}" y2="${y}" ` +
            `stroke="${color}" stroke-width="2"/>`);
        const tag = s.monteCarlo ? " (MC)" : "";
        parts.push(`<text class="legend" x="${legendX + 28}" y="${y + 4}" font-size="12" ` +
            `fill="#111">${esc(s.curve + tag)}</text>`);
    });
    parts.push("</svg>");
    return parts.join("\n") + "\n";
}
