/** Per-figure axis styling: label text and y-axis scale. */
const SUM_SE = "sum spectral efficiency (bits/s/Hz)";
export const FIGURE_STYLES = {
    F4_EST_ERROR: {
        title: "Channel estimation error",
        yLabel: "estimation error variance / beta",
        logY: true,
    },
    F5_WEIGHTS: {
        title: "LMMSE combining weights",
        yLabel: "combining weight",
        logY: false,
    },
    F6_MRC_AS: { title: "MRC with antenna selection", yLabel: SUM_SE, logY: false },
    F7_ZF_AS: { title: "ZF with antenna selection", yLabel: SUM_SE, logY: false },
    F8_MRC_SNR: { title: "MRC sum SE vs SNR", yLabel: SUM_SE, logY: false },
    F9_ZF_SNR: { title: "ZF sum SE vs SNR", yLabel: SUM_SE, logY: false },
    F10_MRC_T: { title: "MRC sum SE vs coherence interval", yLabel: SUM_SE, logY: false },
    F11_ZF_T: { title: "ZF sum SE vs coherence interval", yLabel: SUM_SE, logY: false },
    F12_MRC_COMP: { title: "MRC sum SE, fixed comparator budget", yLabel: SUM_SE, logY: false },
    F13_ZF_COMP: { title: "ZF sum SE, fixed comparator budget", yLabel: SUM_SE, logY: false },
    F14_MRC_N: { title: "MRC sum SE vs high-resolution ADC count", yLabel: SUM_SE, logY: false },
    F15_ZF_N: { title: "ZF sum SE vs high-resolution ADC count", yLabel: SUM_SE, logY: false },
};
export const FIGURE_IDS = Object.keys(FIGURE_STYLES);
export const X_LABELS = {
    snr_db: "SNR (dB)",
    T: "coherence interval T (symbols)",
    N: "high-resolution ADC pairs N",
};
export function xLabel(xName) {
    return X_LABELS[xName] ?? xName;
}
