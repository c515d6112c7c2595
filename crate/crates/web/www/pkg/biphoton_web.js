/* @ts-self-types="./biphoton_web.d.ts" */

/**
 * Joint position density, block-summed to a square image and scaled to a
 * peak of 1. Rows follow `x_s`, columns `x_i`, both increasing.
 */
export class DensityImage {
    static __wrap(ptr) {
        const obj = Object.create(DensityImage.prototype);
        obj.__wbg_ptr = ptr;
        DensityImageFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        DensityImageFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_densityimage_free(ptr, 0);
    }
    /**
     * Variance of `x₋` over the whole simulated grid, mm².
     * @returns {number}
     */
    get delta_x_minus_sq() {
        const ret = wasm.densityimage_delta_x_minus_sq(this.__wbg_ptr);
        return ret;
    }
    /**
     * Half-width of the square, mm.
     * @returns {number}
     */
    get half_extent() {
        const ret = wasm.densityimage_half_extent(this.__wbg_ptr);
        return ret;
    }
    /**
     * Closed-form marginal width when the phases are an opposite pair of
     * quadratics, otherwise NaN.
     * @returns {number}
     */
    get predicted() {
        const ret = wasm.densityimage_predicted(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get size() {
        const ret = wasm.densityimage_size(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * @returns {number}
     */
    get skewness() {
        const ret = wasm.densityimage_skewness(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {Float64Array}
     */
    values() {
        const ret = wasm.densityimage_values(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) DensityImage.prototype[Symbol.dispose] = DensityImage.prototype.free;

/**
 * Noiseless idler scan behind the three-bar object.
 */
export class GhostTrace {
    static __wrap(ptr) {
        const obj = Object.create(GhostTrace.prototype);
        obj.__wbg_ptr = ptr;
        GhostTraceFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        GhostTraceFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_ghosttrace_free(ptr, 0);
    }
    /**
     * Estimated bar period, mm, or NaN when none is found.
     * @returns {number}
     */
    get period() {
        const ret = wasm.ghosttrace_period(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {Float64Array}
     */
    positions() {
        const ret = wasm.ghosttrace_positions(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    rates() {
        const ret = wasm.ghosttrace_rates(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get visibility() {
        const ret = wasm.ghosttrace_visibility(this.__wbg_ptr);
        return ret;
    }
}
if (Symbol.dispose) GhostTrace.prototype[Symbol.dispose] = GhostTrace.prototype.free;

/**
 * `Δx₋²` against `β` for an opposite quadratic pair: exact slice width,
 * its second-order expansion and the marginal width.
 */
export class WidthCurves {
    static __wrap(ptr) {
        const obj = Object.create(WidthCurves.prototype);
        obj.__wbg_ptr = ptr;
        WidthCurvesFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        WidthCurvesFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_widthcurves_free(ptr, 0);
    }
    /**
     * @returns {Float64Array}
     */
    beta() {
        const ret = wasm.widthcurves_beta(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    expansion() {
        const ret = wasm.widthcurves_expansion(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    marginal() {
        const ret = wasm.widthcurves_marginal(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {Float64Array}
     */
    slice() {
        const ret = wasm.widthcurves_slice(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) WidthCurves.prototype[Symbol.dispose] = WidthCurves.prototype.free;

/**
 * Position-domain curvatures `θ″` (mm⁻²) on each arm.
 * @param {number} theta_s
 * @param {number} theta_i
 * @returns {GhostTrace}
 */
export function ghost_trace(theta_s, theta_i) {
    const ret = wasm.ghost_trace(theta_s, theta_i);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return GhostTrace.__wrap(ret[0]);
}

/**
 * Momentum-domain phases `φ″`, `φ‴` (mm², mm³) on each arm.
 * @param {number} pump_width
 * @param {number} signal_quadratic
 * @param {number} signal_cubic
 * @param {number} idler_quadratic
 * @param {number} idler_cubic
 * @returns {DensityImage}
 */
export function position_density(pump_width, signal_quadratic, signal_cubic, idler_quadratic, idler_cubic) {
    const ret = wasm.position_density(pump_width, signal_quadratic, signal_cubic, idler_quadratic, idler_cubic);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return DensityImage.__wrap(ret[0]);
}

/**
 * @param {number} alpha
 * @param {number} pump_width
 * @param {number} beta_max
 * @param {number} samples
 * @returns {WidthCurves}
 */
export function width_curves(alpha, pump_width, beta_max, samples) {
    const ret = wasm.width_curves(alpha, pump_width, beta_max, samples);
    return WidthCurves.__wrap(ret);
}
function __wbg_get_imports() {
    const import0 = {
        __proto__: null,
        __wbg_Error_30c8987f7c2ed4e2: function(arg0, arg1) {
            const ret = Error(getStringFromWasm0(arg0, arg1));
            return ret;
        },
        __wbg___wbindgen_throw_41e9ee4f547fc59a: function(arg0, arg1) {
            throw new Error(getStringFromWasm0(arg0, arg1));
        },
        __wbindgen_init_externref_table: function() {
            const table = wasm.__wbindgen_externrefs;
            const offset = table.grow(4);
            table.set(0, undefined);
            table.set(offset + 0, undefined);
            table.set(offset + 1, null);
            table.set(offset + 2, true);
            table.set(offset + 3, false);
        },
    };
    return {
        __proto__: null,
        "./biphoton_web_bg.js": import0,
    };
}

const DensityImageFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_densityimage_free(ptr, 1));
const GhostTraceFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_ghosttrace_free(ptr, 1));
const WidthCurvesFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_widthcurves_free(ptr, 1));

function getArrayF64FromWasm0(ptr, len) {
    ptr = ptr >>> 0;
    return getFloat64ArrayMemory0().subarray(ptr / 8, ptr / 8 + len);
}

let cachedFloat64ArrayMemory0 = null;
function getFloat64ArrayMemory0() {
    if (cachedFloat64ArrayMemory0 === null || cachedFloat64ArrayMemory0.byteLength === 0) {
        cachedFloat64ArrayMemory0 = new Float64Array(wasm.memory.buffer);
    }
    return cachedFloat64ArrayMemory0;
}

function getStringFromWasm0(ptr, len) {
    return decodeText(ptr >>> 0, len);
}

let cachedUint8ArrayMemory0 = null;
function getUint8ArrayMemory0() {
    if (cachedUint8ArrayMemory0 === null || cachedUint8ArrayMemory0.byteLength === 0) {
        cachedUint8ArrayMemory0 = new Uint8Array(wasm.memory.buffer);
    }
    return cachedUint8ArrayMemory0;
}

function takeFromExternrefTable0(idx) {
    const value = wasm.__wbindgen_externrefs.get(idx);
    wasm.__externref_table_dealloc(idx);
    return value;
}

let cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
cachedTextDecoder.decode();
const MAX_SAFARI_DECODE_BYTES = 2146435072;
let numBytesDecoded = 0;
function decodeText(ptr, len) {
    numBytesDecoded += len;
    if (numBytesDecoded >= MAX_SAFARI_DECODE_BYTES) {
        cachedTextDecoder = new TextDecoder('utf-8', { ignoreBOM: true, fatal: true });
        cachedTextDecoder.decode();
        numBytesDecoded = len;
    }
    return cachedTextDecoder.decode(getUint8ArrayMemory0().subarray(ptr, ptr + len));
}

let wasmModule, wasmInstance, wasm;
function __wbg_finalize_init(instance, module) {
    wasmInstance = instance;
    wasm = instance.exports;
    wasmModule = module;
    cachedFloat64ArrayMemory0 = null;
    cachedUint8ArrayMemory0 = null;
    wasm.__wbindgen_start();
    return wasm;
}

async function __wbg_load(module, imports) {
    if (typeof Response === 'function' && module instanceof Response) {
        if (!module.ok) {
            throw new Error(`failed to fetch Wasm: ${module.status} ${module.statusText} fetching '${module.url}'`);
        }

        if (typeof WebAssembly.instantiateStreaming === 'function') {
            try {
                return await WebAssembly.instantiateStreaming(module, imports);
            } catch (e) {
                const validResponse = expectedResponseType(module.type);

                if (validResponse && module.headers.get('Content-Type') !== 'application/wasm') {
                    console.warn("`WebAssembly.instantiateStreaming` failed because your server does not serve Wasm with `application/wasm` MIME type. Falling back to `WebAssembly.instantiate` which is slower. Original error:\n", e);

                } else { throw e; }
            }
        }

        const bytes = await module.arrayBuffer();
        return await WebAssembly.instantiate(bytes, imports);
    } else {
        const instance = await WebAssembly.instantiate(module, imports);

        if (instance instanceof WebAssembly.Instance) {
            return { instance, module };
        } else {
            return instance;
        }
    }

    function expectedResponseType(type) {
        switch (type) {
            case 'basic': case 'cors': case 'default': return true;
        }
        return false;
    }
}

function initSync(module) {
    if (wasm !== undefined) return wasm;


    if (module !== undefined) {
        if (Object.getPrototypeOf(module) === Object.prototype) {
            ({module} = module)
        } else {
            console.warn('using deprecated parameters for `initSync()`; pass a single object instead')
        }
    }

    const imports = __wbg_get_imports();
    if (!(module instanceof WebAssembly.Module)) {
        module = new WebAssembly.Module(module);
    }
    const instance = new WebAssembly.Instance(module, imports);
    return __wbg_finalize_init(instance, module);
}

async function __wbg_init(module_or_path) {
    if (wasm !== undefined) return wasm;


    if (module_or_path !== undefined) {
        if (Object.getPrototypeOf(module_or_path) === Object.prototype) {
            ({module_or_path} = module_or_path)
        } else {
            console.warn('using deprecated parameters for the initialization function; pass a single object instead')
        }
    }

    if (module_or_path === undefined) {
        module_or_path = new URL('biphoton_web_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
