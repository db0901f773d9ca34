//! C ABI over the `thzlink` simulator.
//!
//! Every fallible call returns a [`ThzStatus`]; on failure a message can be
//! fetched with [`thz_last_error_message`] from the same thread. Objects are
//! opaque handles released with their matching `_free` function, and strings
//! returned to the caller are released with [`thz_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use thzlink::chanmodel::{path_gain, PathGainSpec};
use thzlink::decoders::{decode, DecodeStatus, DecoderConfig, DecoderKind};
use thzlink::harness::{noise_power, run_sweep, to_csv, Arm, Series, SeriesMeta, SimConfig};
use thzlink::{Crc, PolarCode, ReliabilityVector};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    Runtime = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThzCrc {
    None = 0,
    /// 11-bit CRC, polynomial 0x621.
    Nr11 = 1,
    /// 4-bit CRC, polynomial 0x3.
    Test4 = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThzDecoder {
    Sc = 0,
    Scl = 1,
    Grand = 2,
    Orbgrand = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThzDecodeStatus {
    Decoded = 0,
    AbandonedAtBudget = 1,
    CrcFailAllPaths = 2,
}

/// Opaque polar code handle.
pub struct ThzPolarCode(PolarCode);

/// Opaque simulation handle holding a validated configuration.
pub struct ThzSimulation(SimConfig);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: ThzStatus, msg: impl Into<String>) -> ThzStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning a panic into [`ThzStatus::Panic`].
fn guard(f: impl FnOnce() -> ThzStatus) -> ThzStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(ThzStatus::Panic, "internal panic"))
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn thz_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn thz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Thermal noise power `k_B T B` in watts.
///
/// # Safety
/// `out` must be NULL or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn thz_noise_power(
    temperature_k: f64,
    bandwidth_hz: f64,
    out: *mut f64,
) -> ThzStatus {
    if out.is_null() {
        return fail(ThzStatus::NullPointer, "out is NULL");
    }
    match noise_power(temperature_k, bandwidth_hz) {
        Ok(p) => {
            *out = p;
            ThzStatus::Ok
        }
        Err(e) => fail(ThzStatus::InvalidArgument, e.to_string()),
    }
}

/// Amplitude path gain of subcarrier `l` (1-based).
///
/// # Safety
/// `out` must be NULL or point to writable memory for one `double`.
#[no_mangle]
pub unsafe extern "C" fn thz_path_gain(
    carrier_freq_hz: f64,
    bandwidth_hz: f64,
    num_subcarriers: usize,
    distance_m: f64,
    absorption_coeff_per_m: f64,
    l: usize,
    out: *mut f64,
) -> ThzStatus {
    if out.is_null() {
        return fail(ThzStatus::NullPointer, "out is NULL");
    }
    let spec = PathGainSpec {
        carrier_freq_hz,
        bandwidth_hz,
        num_subcarriers,
        distance_m,
        absorption_coeff_per_m,
    };
    match path_gain(&spec, l) {
        Ok(g) => {
            *out = g;
            ThzStatus::Ok
        }
        Err(e) => fail(ThzStatus::InvalidArgument, e.to_string()),
    }
}

/// Builds an `(n, k)` polar code; `k` counts the CRC bits.
///
/// # Safety
/// `out` must be NULL or point to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn thz_polar_code_new(
    n: usize,
    k: usize,
    crc: ThzCrc,
    out: *mut *mut ThzPolarCode,
) -> ThzStatus {
    if out.is_null() {
        return fail(ThzStatus::NullPointer, "out is NULL");
    }
    guard(|| {
        let crc = match crc {
            ThzCrc::None => Crc::NONE,
            ThzCrc::Nr11 => Crc::NR11,
            ThzCrc::Test4 => Crc::TEST4,
        };
        match PolarCode::construct(n, k, crc) {
            Ok(code) => {
                *out = Box::into_raw(Box::new(ThzPolarCode(code)));
                ThzStatus::Ok
            }
            Err(e) => fail(ThzStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `code` must be NULL or a handle from [`thz_polar_code_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn thz_polar_code_free(code: *mut ThzPolarCode) {
    if !code.is_null() {
        drop(Box::from_raw(code));
    }
}

/// Block length, or 0 for NULL.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn thz_polar_code_n(code: *const ThzPolarCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.n())
}

/// Payload bits per codeword (`k` minus the CRC degree), or 0 for NULL.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn thz_polar_code_payload_len(code: *const ThzPolarCode) -> usize {
    code.as_ref().map_or(0, |c| c.0.payload_len())
}

/// Frozen mask as a hex string (free with [`thz_string_free`]), or NULL.
///
/// # Safety
/// `code` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn thz_polar_code_frozen_hex(code: *const ThzPolarCode) -> *mut c_char {
    match code.as_ref() {
        Some(c) => into_c_string(c.0.frozen_mask_hex()),
        None => {
            set_error("code is NULL");
            ptr::null_mut()
        }
    }
}

/// Encodes `payload_len` payload bits (one per byte, 0 or 1) into `n` bytes at
/// `codeword`.
///
/// # Safety
/// `payload` must point to `payload_len` readable bytes and `codeword` to
/// `codeword_len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn thz_polar_code_encode(
    code: *const ThzPolarCode,
    payload: *const u8,
    payload_len: usize,
    codeword: *mut u8,
    codeword_len: usize,
) -> ThzStatus {
    let Some(code) = code.as_ref() else {
        return fail(ThzStatus::NullPointer, "code is NULL");
    };
    if payload.is_null() || codeword.is_null() {
        return fail(ThzStatus::NullPointer, "buffer is NULL");
    }
    if codeword_len < code.0.n() {
        return fail(
            ThzStatus::BufferTooSmall,
            format!("need {} bytes", code.0.n()),
        );
    }
    let input = slice::from_raw_parts(payload, payload_len);
    guard(|| match code.0.encode_payload(input) {
        Ok(x) => {
            slice::from_raw_parts_mut(codeword, x.len()).copy_from_slice(&x);
            ThzStatus::Ok
        }
        Err(e) => fail(ThzStatus::InvalidArgument, e.to_string()),
    })
}

/// Writes whether `word` (one bit per byte) is a codeword to `out`.
///
/// # Safety
/// `word` must point to `len` readable bytes; `out` to one writable `bool`.
#[no_mangle]
pub unsafe extern "C" fn thz_polar_code_is_codeword(
    code: *const ThzPolarCode,
    word: *const u8,
    len: usize,
    out: *mut bool,
) -> ThzStatus {
    let Some(code) = code.as_ref() else {
        return fail(ThzStatus::NullPointer, "code is NULL");
    };
    if word.is_null() || out.is_null() {
        return fail(ThzStatus::NullPointer, "buffer is NULL");
    }
    if len != code.0.n() {
        return fail(
            ThzStatus::InvalidArgument,
            format!("word has {len} bits, code has {}", code.0.n()),
        );
    }
    *out = code.0.is_codeword(slice::from_raw_parts(word, len));
    ThzStatus::Ok
}

/// Decodes `n` signed LLRs (positive favours 0). `param` is the list size for
/// SCL and the query budget for the GRAND decoders, ignored for SC; 0 picks
/// the default. The payload goes to `payload` and the decoder verdict to
/// `status`.
///
/// # Safety
/// `llrs` must point to `len` readable doubles, `payload` to `payload_len`
/// writable bytes and `status` to one writable [`ThzDecodeStatus`].
#[no_mangle]
#[allow(clippy::too_many_arguments)]
pub unsafe extern "C" fn thz_polar_code_decode(
    code: *const ThzPolarCode,
    llrs: *const f64,
    len: usize,
    decoder: ThzDecoder,
    param: u64,
    payload: *mut u8,
    payload_len: usize,
    status: *mut ThzDecodeStatus,
) -> ThzStatus {
    let Some(code) = code.as_ref() else {
        return fail(ThzStatus::NullPointer, "code is NULL");
    };
    if llrs.is_null() || payload.is_null() || status.is_null() {
        return fail(ThzStatus::NullPointer, "buffer is NULL");
    }
    if len != code.0.n() {
        return fail(
            ThzStatus::InvalidArgument,
            format!("got {len} LLRs, code has {}", code.0.n()),
        );
    }
    if payload_len < code.0.payload_len() {
        return fail(
            ThzStatus::BufferTooSmall,
            format!("need {} bytes", code.0.payload_len()),
        );
    }
    let llrs = slice::from_raw_parts(llrs, len);
    guard(|| {
        let mut cfg = DecoderConfig::new(match decoder {
            ThzDecoder::Sc => DecoderKind::Sc,
            ThzDecoder::Scl => DecoderKind::Scl,
            ThzDecoder::Grand => DecoderKind::Grand,
            ThzDecoder::Orbgrand => DecoderKind::Orbgrand,
        });
        if param > 0 {
            match decoder {
                ThzDecoder::Scl => cfg.list_size = param as usize,
                ThzDecoder::Grand | ThzDecoder::Orbgrand => cfg.budget = param,
                ThzDecoder::Sc => {}
            }
        }
        let rel = match ReliabilityVector::from_llrs(llrs) {
            Ok(r) => r,
            Err(e) => return fail(ThzStatus::InvalidArgument, e.to_string()),
        };
        match decode(&rel, &code.0, &cfg) {
            Ok(out) => {
                slice::from_raw_parts_mut(payload, out.info_bits.len())
                    .copy_from_slice(&out.info_bits);
                *status = match out.status {
                    DecodeStatus::Decoded => ThzDecodeStatus::Decoded,
                    DecodeStatus::AbandonedAtBudget => ThzDecodeStatus::AbandonedAtBudget,
                    DecodeStatus::CrcFailAllPaths => ThzDecodeStatus::CrcFailAllPaths,
                };
                ThzStatus::Ok
            }
            Err(e) => fail(ThzStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Parses and validates a JSON simulation config.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must point to writable
/// memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn thz_simulation_new(
    json: *const c_char,
    out: *mut *mut ThzSimulation,
) -> ThzStatus {
    if json.is_null() || out.is_null() {
        return fail(ThzStatus::NullPointer, "argument is NULL");
    }
    let Ok(text) = CStr::from_ptr(json).to_str() else {
        return fail(ThzStatus::InvalidArgument, "config is not UTF-8");
    };
    guard(|| match thzlink::cli::resolve_config_str(text, &[], None) {
        Ok(cfg) => {
            *out = Box::into_raw(Box::new(ThzSimulation(cfg)));
            ThzStatus::Ok
        }
        Err(e) => fail(ThzStatus::Config, e.to_string()),
    })
}

/// # Safety
/// `sim` must be NULL or a handle from [`thz_simulation_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn thz_simulation_free(sim: *mut ThzSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Overrides the master seed.
///
/// # Safety
/// `sim` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn thz_simulation_set_seed(sim: *mut ThzSimulation, seed: u64) -> ThzStatus {
    match sim.as_mut() {
        Some(s) => {
            s.0.seed = seed;
            ThzStatus::Ok
        }
        None => fail(ThzStatus::NullPointer, "sim is NULL"),
    }
}

/// Runs the sweep and hands back the CSV (free with [`thz_string_free`]).
///
/// # Safety
/// `sim` must be a live handle; `csv_out` must point to writable memory for
/// one pointer.
#[no_mangle]
pub unsafe extern "C" fn thz_simulation_run(
    sim: *const ThzSimulation,
    csv_out: *mut *mut c_char,
) -> ThzStatus {
    let Some(sim) = sim.as_ref() else {
        return fail(ThzStatus::NullPointer, "sim is NULL");
    };
    if csv_out.is_null() {
        return fail(ThzStatus::NullPointer, "csv_out is NULL");
    }
    guard(|| {
        let cfg = &sim.0;
        match run_sweep(cfg) {
            Ok(points) => {
                let arm = Arm {
                    regime: cfg.regime,
                    decoder: cfg.decoder,
                };
                let csv = to_csv(&[Series {
                    meta: SeriesMeta::new(cfg, &arm),
                    points,
                }]);
                *csv_out = into_c_string(csv);
                ThzStatus::Ok
            }
            Err(e) if e.is_config() => fail(ThzStatus::Config, e.to_string()),
            Err(e) => fail(ThzStatus::Runtime, e.to_string()),
        }
    })
}
