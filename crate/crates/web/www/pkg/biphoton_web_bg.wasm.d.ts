/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_densityimage_free: (a: number, b: number) => void;
export const __wbg_ghosttrace_free: (a: number, b: number) => void;
export const __wbg_widthcurves_free: (a: number, b: number) => void;
export const densityimage_delta_x_minus_sq: (a: number) => number;
export const densityimage_half_extent: (a: number) => number;
export const densityimage_predicted: (a: number) => number;
export const densityimage_size: (a: number) => number;
export const densityimage_skewness: (a: number) => number;
export const densityimage_values: (a: number) => [number, number];
export const ghost_trace: (a: number, b: number) => [number, number, number];
export const ghosttrace_period: (a: number) => number;
export const ghosttrace_positions: (a: number) => [number, number];
export const ghosttrace_rates: (a: number) => [number, number];
export const ghosttrace_visibility: (a: number) => number;
export const position_density: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const width_curves: (a: number, b: number, c: number, d: number) => number;
export const widthcurves_beta: (a: number) => [number, number];
export const widthcurves_expansion: (a: number) => [number, number];
export const widthcurves_marginal: (a: number) => [number, number];
export const widthcurves_slice: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
