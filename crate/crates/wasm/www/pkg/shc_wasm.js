/* @ts-self-types="./shc_wasm.d.ts" */

export class Constants {
    static __wrap(ptr) {
        const obj = Object.create(Constants.prototype);
        obj.__wbg_ptr = ptr;
        ConstantsFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        ConstantsFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_constants_free(ptr, 0);
    }
    /**
     * @returns {number}
     */
    get bracket_high() {
        const ret = wasm.__wbg_get_constants_bracket_high(this.__wbg_ptr);
        return ret;
    }
    /**
     * Ball bracket for the third-term constant; NaN for intervals.
     * @returns {number}
     */
    get bracket_low() {
        const ret = wasm.__wbg_get_constants_bracket_low(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get perimeter() {
        const ret = wasm.__wbg_get_constants_perimeter(this.__wbg_ptr);
        return ret;
    }
    /**
     * Second-term constant of the two-term law.
     * @returns {number}
     */
    get second_term() {
        const ret = wasm.__wbg_get_constants_second_term(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get sqrt_coefficient() {
        const ret = wasm.__wbg_get_constants_sqrt_coefficient(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get third_term_exact() {
        const ret = wasm.__wbg_get_constants_third_term_exact(this.__wbg_ptr);
        return ret;
    }
    /**
     * Third-term constant; NaN outside `1 < alpha < 2`.
     * @returns {number}
     */
    get third_term() {
        const ret = wasm.__wbg_get_constants_third_term(this.__wbg_ptr);
        return ret;
    }
    /**
     * @returns {number}
     */
    get volume() {
        const ret = wasm.__wbg_get_constants_volume(this.__wbg_ptr);
        return ret;
    }
    /**
     * @param {number} arg0
     */
    set bracket_high(arg0) {
        wasm.__wbg_set_constants_bracket_high(this.__wbg_ptr, arg0);
    }
    /**
     * Ball bracket for the third-term constant; NaN for intervals.
     * @param {number} arg0
     */
    set bracket_low(arg0) {
        wasm.__wbg_set_constants_bracket_low(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set perimeter(arg0) {
        wasm.__wbg_set_constants_perimeter(this.__wbg_ptr, arg0);
    }
    /**
     * Second-term constant of the two-term law.
     * @param {number} arg0
     */
    set second_term(arg0) {
        wasm.__wbg_set_constants_second_term(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set sqrt_coefficient(arg0) {
        wasm.__wbg_set_constants_sqrt_coefficient(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set third_term_exact(arg0) {
        wasm.__wbg_set_constants_third_term_exact(this.__wbg_ptr, arg0);
    }
    /**
     * Third-term constant; NaN outside `1 < alpha < 2`.
     * @param {number} arg0
     */
    set third_term(arg0) {
        wasm.__wbg_set_constants_third_term(this.__wbg_ptr, arg0);
    }
    /**
     * @param {number} arg0
     */
    set volume(arg0) {
        wasm.__wbg_set_constants_volume(this.__wbg_ptr, arg0);
    }
}
if (Symbol.dispose) Constants.prototype[Symbol.dispose] = Constants.prototype.free;

/**
 * Abscissae with one or more value columns.
 */
export class Series {
    static __wrap(ptr) {
        const obj = Object.create(Series.prototype);
        obj.__wbg_ptr = ptr;
        SeriesFinalization.register(obj, obj.__wbg_ptr, obj);
        return obj;
    }
    __destroy_into_raw() {
        const ptr = this.__wbg_ptr;
        this.__wbg_ptr = 0;
        SeriesFinalization.unregister(this);
        return ptr;
    }
    free() {
        const ptr = this.__destroy_into_raw();
        wasm.__wbg_series_free(ptr, 0);
    }
    /**
     * @param {number} i
     * @returns {Float64Array}
     */
    column(i) {
        const ret = wasm.series_column(this.__wbg_ptr, i);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
    /**
     * @returns {number}
     */
    get width() {
        const ret = wasm.series_width(this.__wbg_ptr);
        return ret >>> 0;
    }
    /**
     * @returns {Float64Array}
     */
    get xs() {
        const ret = wasm.series_xs(this.__wbg_ptr);
        var v1 = getArrayF64FromWasm0(ret[0], ret[1]).slice();
        wasm.__wbindgen_free(ret[0], ret[1] * 8, 8);
        return v1;
    }
}
if (Symbol.dispose) Series.prototype[Symbol.dispose] = Series.prototype.free;

/**
 * @param {string} domain
 * @param {number} alpha
 * @returns {Constants}
 */
export function constants(domain, alpha) {
    const ptr0 = passStringToWasm0(domain, wasm.__wbindgen_malloc, wasm.__wbindgen_realloc);
    const len0 = WASM_VECTOR_LEN;
    const ret = wasm.constants(ptr0, len0, alpha);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Constants.__wrap(ret[0]);
}

/**
 * @param {number} alpha
 * @param {number} t
 * @param {number} x_min
 * @param {number} x_max
 * @param {number} points
 * @returns {Series}
 */
export function density_series(alpha, t, x_min, x_max, points) {
    const ret = wasm.density_series(alpha, t, x_min, x_max, points);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Series.__wrap(ret[0]);
}

/**
 * @param {string} domain
 * @param {number} alpha
 * @param {number} t_max
 * @param {number} t_min
 * @param {number} points
 * @returns {Series}
 */
export function heat_curves(domain, alpha, t_max, t_min, points) {
    const ptr0 = passStringToWasm0(domain, wasm.__wbindgen_malloc, wasm.__wbindgen_realloc);
    const len0 = WASM_VECTOR_LEN;
    const ret = wasm.heat_curves(ptr0, len0, alpha, t_max, t_min, points);
    if (ret[2]) {
        throw takeFromExternrefTable0(ret[1]);
    }
    return Series.__wrap(ret[0]);
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
        "./shc_wasm_bg.js": import0,
    };
}

const ConstantsFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_constants_free(ptr, 1));
const SeriesFinalization = (typeof FinalizationRegistry === 'undefined')
    ? { register: () => {}, unregister: () => {} }
    : new FinalizationRegistry(ptr => wasm.__wbg_series_free(ptr, 1));

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

function passStringToWasm0(arg, malloc, realloc) {
    if (realloc === undefined) {
        const buf = cachedTextEncoder.encode(arg);
        const ptr = malloc(buf.length, 1) >>> 0;
        getUint8ArrayMemory0().subarray(ptr, ptr + buf.length).set(buf);
        WASM_VECTOR_LEN = buf.length;
        return ptr;
    }

    let len = arg.length;
    let ptr = malloc(len, 1) >>> 0;

    const mem = getUint8ArrayMemory0();

    let offset = 0;

    for (; offset < len; offset++) {
        const code = arg.charCodeAt(offset);
        if (code > 0x7F) break;
        mem[ptr + offset] = code;
    }
    if (offset !== len) {
        if (offset !== 0) {
            arg = arg.slice(offset);
        }
        ptr = realloc(ptr, len, len = offset + arg.length * 3, 1) >>> 0;
        const view = getUint8ArrayMemory0().subarray(ptr + offset, ptr + len);
        const ret = cachedTextEncoder.encodeInto(arg, view);

        offset += ret.written;
        ptr = realloc(ptr, len, offset, 1) >>> 0;
    }

    WASM_VECTOR_LEN = offset;
    return ptr;
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

const cachedTextEncoder = new TextEncoder();

if (!('encodeInto' in cachedTextEncoder)) {
    cachedTextEncoder.encodeInto = function (arg, view) {
        const buf = cachedTextEncoder.encode(arg);
        view.set(buf);
        return {
            read: arg.length,
            written: buf.length
        };
    };
}

let WASM_VECTOR_LEN = 0;

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
        module_or_path = new URL('shc_wasm_bg.wasm', import.meta.url);
    }
    const imports = __wbg_get_imports();

    if (typeof module_or_path === 'string' || (typeof Request === 'function' && module_or_path instanceof Request) || (typeof URL === 'function' && module_or_path instanceof URL)) {
        module_or_path = fetch(module_or_path);
    }

    const { instance, module } = await __wbg_load(await module_or_path, imports);

    return __wbg_finalize_init(instance, module);
}

export { initSync, __wbg_init as default };
