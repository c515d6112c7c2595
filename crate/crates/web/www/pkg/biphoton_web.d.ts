/* tslint:disable */
/* eslint-disable */

/**
 * Joint position density, block-summed to a square image and scaled to a
 * peak of 1. Rows follow `x_s`, columns `x_i`, both increasing.
 */
export class DensityImage {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    values(): Float64Array;
    /**
     * Variance of `x₋` over the whole simulated grid, mm².
     */
    readonly delta_x_minus_sq: number;
    /**
     * Half-width of the square, mm.
     */
    readonly half_extent: number;
    /**
     * Closed-form marginal width when the phases are an opposite pair of
     * quadratics, otherwise NaN.
     */
    readonly predicted: number;
    readonly size: number;
    readonly skewness: number;
}

/**
 * Noiseless idler scan behind the three-bar object.
 */
export class GhostTrace {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    positions(): Float64Array;
    rates(): Float64Array;
    /**
     * Estimated bar period, mm, or NaN when none is found.
     */
    readonly period: number;
    readonly visibility: number;
}

/**
 * `Δx₋²` against `β` for an opposite quadratic pair: exact slice width,
 * its second-order expansion and the marginal width.
 */
export class WidthCurves {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    beta(): Float64Array;
    expansion(): Float64Array;
    marginal(): Float64Array;
    slice(): Float64Array;
}

/**
 * Position-domain curvatures `θ″` (mm⁻²) on each arm.
 */
export function ghost_trace(theta_s: number, theta_i: number): GhostTrace;

/**
 * Momentum-domain phases `φ″`, `φ‴` (mm², mm³) on each arm.
 */
export function position_density(pump_width: number, signal_quadratic: number, signal_cubic: number, idler_quadratic: number, idler_cubic: number): DensityImage;

export function width_curves(alpha: number, pump_width: number, beta_max: number, samples: number): WidthCurves;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_densityimage_free: (a: number, b: number) => void;
    readonly __wbg_ghosttrace_free: (a: number, b: number) => void;
    readonly __wbg_widthcurves_free: (a: number, b: number) => void;
    readonly densityimage_delta_x_minus_sq: (a: number) => number;
    readonly densityimage_half_extent: (a: number) => number;
    readonly densityimage_predicted: (a: number) => number;
    readonly densityimage_size: (a: number) => number;
    readonly densityimage_skewness: (a: number) => number;
    readonly densityimage_values: (a: number) => [number, number];
    readonly ghost_trace: (a: number, b: number) => [number, number, number];
    readonly ghosttrace_period: (a: number) => number;
    readonly ghosttrace_positions: (a: number) => [number, number];
    readonly ghosttrace_rates: (a: number) => [number, number];
    readonly ghosttrace_visibility: (a: number) => number;
    readonly position_density: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly width_curves: (a: number, b: number, c: number, d: number) => number;
    readonly widthcurves_beta: (a: number) => [number, number];
    readonly widthcurves_expansion: (a: number) => [number, number];
    readonly widthcurves_marginal: (a: number) => [number, number];
    readonly widthcurves_slice: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
