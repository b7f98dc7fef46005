//! C ABI for the polyzeta engine: opaque engine handles, UTF-8/JSON string
//! results, and integer status codes.
//!
//! Every function returning `PzStatus` reports failure details through
//! `pz_last_error`; strings returned through out-parameters are owned by the
//! caller and must be released with `pz_string_free`.  All pointer-taking
//! entry points are `unsafe`: null pointers are rejected with
//! `PZ_NULL_POINTER`, but non-null pointers must be valid for the stated
//! use.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use polyzeta::identify::Engine;
use polyzeta::numcheck::{euler_gamma_estimate, mzv_estimate, Composition};
use polyzeta::words::{lyndon_enumerate, Alphabet};

/// Status codes mirroring the CLI exit-code contract.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PzStatus {
    /// Success.
    PzOk = 0,
    /// Invalid argument or unusable input.
    PzUsage = 2,
    /// Internal inconsistency in the derivation.
    PzInternal = 3,
    /// A required pointer argument was null.
    PzNullPointer = 4,
}

/// Opaque handle over a derived engine.
pub struct PzEngine {
    inner: Engine,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn status_of(err: &polyzeta::Error) -> PzStatus {
    match err.exit_code() {
        3 => PzStatus::PzInternal,
        _ => PzStatus::PzUsage,
    }
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> PzStatus {
    let c = match CString::new(s) {
        Ok(c) => c,
        Err(_) => {
            set_error("result contained an interior NUL byte");
            return PzStatus::PzInternal;
        }
    };
    *out = c.into_raw();
    PzStatus::PzOk
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

/// Message describing the most recent failure on this thread.  The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pz_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Derive an engine up to `max_weight` (>= 2) and hand back an owned handle.
///
/// # Safety
/// `out` must be null or a valid pointer to a `PzEngine*` slot.
#[no_mangle]
pub unsafe extern "C" fn pz_engine_new(max_weight: u32, out: *mut *mut PzEngine) -> PzStatus {
    if out.is_null() {
        return PzStatus::PzNullPointer;
    }
    if max_weight < 2 {
        set_error("max_weight must be >= 2");
        return PzStatus::PzUsage;
    }
    match Engine::derive(max_weight) {
        Ok(engine) => {
            let boxed = Box::new(PzEngine { inner: engine });
            *out = Box::into_raw(boxed);
            PzStatus::PzOk
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Release an engine handle.  Null is ignored.
///
/// # Safety
/// `engine` must be null or a pointer previously returned by
/// `pz_engine_new` and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pz_engine_free(engine: *mut PzEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

/// Release a string returned by this library.  Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer previously returned through an
/// out-parameter of this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn pz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Reduce a convergent zeta value given as a composition string ("2,1") to
/// canonical form.  On success writes a JSON object
/// `{"input", "canonical", "display"}`.
///
/// # Safety
/// `engine` must be a live handle from `pz_engine_new`, `composition` a
/// NUL-terminated string, `out_json` a valid slot for a `char*`.
#[no_mangle]
pub unsafe extern "C" fn pz_reduce_composition(
    engine: *mut PzEngine,
    composition: *const c_char,
    out_json: *mut *mut c_char,
) -> PzStatus {
    if engine.is_null() || out_json.is_null() {
        return PzStatus::PzNullPointer;
    }
    let Some(comp_str) = read_str(composition) else {
        set_error("composition must be a valid UTF-8 string");
        return PzStatus::PzUsage;
    };
    let engine = &mut (*engine).inner;
    let mut run = || -> polyzeta::Result<String> {
        let comp = Composition::parse(comp_str)?;
        let reduced = engine.reduce_composition(comp.parts())?;
        Ok(serde_json::json!({
            "input": format!("zeta({comp_str})"),
            "canonical": reduced,
            "display": reduced.to_string(),
        })
        .to_string())
    };
    match run() {
        Ok(s) => give_string(out_json, s),
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Regularized constant of a (possibly divergent) harmonic sum given as a
/// composition string; `shuffle_side` non-zero selects the shuffle
/// regularization.
///
/// # Safety
/// Same contracts as `pz_reduce_composition`.
#[no_mangle]
pub unsafe extern "C" fn pz_gamma_constant(
    engine: *mut PzEngine,
    composition: *const c_char,
    shuffle_side: i32,
    out_json: *mut *mut c_char,
) -> PzStatus {
    if engine.is_null() || out_json.is_null() {
        return PzStatus::PzNullPointer;
    }
    let Some(comp_str) = read_str(composition) else {
        set_error("composition must be a valid UTF-8 string");
        return PzStatus::PzUsage;
    };
    let engine = &mut (*engine).inner;
    let mut run = || -> polyzeta::Result<String> {
        let comp = Composition::parse(comp_str)?;
        let word = comp.to_word();
        let value = if shuffle_side != 0 {
            engine.gamma_constant_shuffle(&word)?
        } else {
            engine.gamma_constant(&word)?
        };
        Ok(serde_json::json!({
            "word": comp_str,
            "regularization": if shuffle_side != 0 { "shuffle" } else { "stuffle" },
            "canonical": value,
            "display": value.to_string(),
        })
        .to_string())
    };
    match run() {
        Ok(s) => give_string(out_json, s),
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Derived rewrite rules and irreducibles as JSON.  `side` is 'x', 'y' or
/// 'b' for both.
///
/// # Safety
/// `engine` must be a live handle, `out_json` a valid slot for a `char*`.
#[no_mangle]
pub unsafe extern "C" fn pz_relations_json(
    engine: *const PzEngine,
    side: c_char,
    out_json: *mut *mut c_char,
) -> PzStatus {
    if engine.is_null() || out_json.is_null() {
        return PzStatus::PzNullPointer;
    }
    let engine = &(*engine).inner;
    let sides: Vec<Alphabet> = match side as u8 {
        b'x' => vec![Alphabet::X],
        b'y' => vec![Alphabet::Y],
        b'b' => vec![Alphabet::X, Alphabet::Y],
        _ => {
            set_error("side must be 'x', 'y' or 'b'");
            return PzStatus::PzUsage;
        }
    };
    let mut blocks = Vec::new();
    for s in sides {
        let rs = engine.rewrite_system(s);
        for weight in 2..=engine.max_weight() {
            let rules: Vec<serde_json::Value> = rs
                .rules_of_weight(weight)
                .iter()
                .map(|(lhs, rhs)| serde_json::json!({"lhs": lhs.to_string(), "rhs": rhs}))
                .collect();
            let irreducibles: Vec<String> = rs
                .irreducibles_of_weight(weight)
                .iter()
                .map(|x| x.to_string())
                .collect();
            blocks.push(serde_json::json!({
                "side": s.to_string(),
                "weight": weight,
                "rules": rules,
                "irreducibles": irreducibles,
            }));
        }
    }
    give_string(out_json, serde_json::Value::Array(blocks).to_string())
}

/// Lyndon words of one alphabet ('x' or 'y') up to a weight, as a JSON
/// array of word strings.  No engine required.
///
/// # Safety
/// `out_json` must be a valid slot for a `char*`.
#[no_mangle]
pub unsafe extern "C" fn pz_lyndon_words(
    alphabet: c_char,
    max_weight: u32,
    out_json: *mut *mut c_char,
) -> PzStatus {
    if out_json.is_null() {
        return PzStatus::PzNullPointer;
    }
    let alphabet = match alphabet as u8 {
        b'x' => Alphabet::X,
        b'y' => Alphabet::Y,
        _ => {
            set_error("alphabet must be 'x' or 'y'");
            return PzStatus::PzUsage;
        }
    };
    if max_weight < 1 {
        set_error("max_weight must be >= 1");
        return PzStatus::PzUsage;
    }
    let words = lyndon_enumerate(alphabet, max_weight);
    give_string(
        out_json,
        serde_json::to_string(&words).expect("serializable"),
    )
}

/// Partial-sum estimate of a convergent zeta value; writes the f64 estimate
/// and its error bound.
///
/// # Safety
/// `composition` must be a NUL-terminated string; `out_value` and `out_err`
/// must be valid `double` slots.
#[no_mangle]
pub unsafe extern "C" fn pz_mzv_estimate(
    composition: *const c_char,
    n: u64,
    refine: i32,
    out_value: *mut f64,
    out_err: *mut f64,
) -> PzStatus {
    if out_value.is_null() || out_err.is_null() {
        return PzStatus::PzNullPointer;
    }
    let Some(comp_str) = read_str(composition) else {
        set_error("composition must be a valid UTF-8 string");
        return PzStatus::PzUsage;
    };
    let run = || -> polyzeta::Result<(f64, f64)> {
        let comp = Composition::parse(comp_str)?;
        let est = mzv_estimate(&comp, n, refine != 0)?;
        Ok((est.to_f64(), est.err_est))
    };
    match run() {
        Ok((v, e)) => {
            *out_value = v;
            *out_err = e;
            PzStatus::PzOk
        }
        Err(e) => {
            set_error(&e.to_string());
            status_of(&e)
        }
    }
}

/// Estimate of the Euler constant from n partial-sum terms.
///
/// # Safety
/// `out_value` must be a valid `double` slot.
#[no_mangle]
pub unsafe extern "C" fn pz_euler_gamma(n: u64, out_value: *mut f64) -> PzStatus {
    if out_value.is_null() {
        return PzStatus::PzNullPointer;
    }
    if n == 0 {
        set_error("n must be >= 1");
        return PzStatus::PzUsage;
    }
    *out_value = euler_gamma_estimate(n).to_f64();
    PzStatus::PzOk
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn make_engine(weight: u32) -> *mut PzEngine {
        let mut handle: *mut PzEngine = ptr::null_mut();
        assert_eq!(
            unsafe { pz_engine_new(weight, &mut handle) },
            PzStatus::PzOk
        );
        assert!(!handle.is_null());
        handle
    }

    fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
        unsafe { pz_string_free(ptr) };
        s
    }

    #[test]
    fn reduce_through_abi() {
        let engine = make_engine(3);
        let comp = CString::new("2,1").unwrap();
        let mut out: *mut c_char = ptr::null_mut();
        let status = unsafe { pz_reduce_composition(engine, comp.as_ptr(), &mut out) };
        assert_eq!(status, PzStatus::PzOk);
        let json = take_string(out);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["display"], "zeta(3)");
        unsafe { pz_engine_free(engine) };
    }

    #[test]
    fn divergent_is_usage_error() {
        let engine = make_engine(3);
        let comp = CString::new("1,2").unwrap();
        let mut out: *mut c_char = ptr::null_mut();
        let status = unsafe { pz_reduce_composition(engine, comp.as_ptr(), &mut out) };
        assert_eq!(status, PzStatus::PzUsage);
        let msg = unsafe { CStr::from_ptr(pz_last_error()) }.to_str().unwrap();
        assert!(msg.contains("divergent"), "{msg}");
        unsafe { pz_engine_free(engine) };
    }

    #[test]
    fn gamma_and_relations() {
        let engine = make_engine(3);
        let comp = CString::new("1,1").unwrap();
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { pz_gamma_constant(engine, comp.as_ptr(), 0, &mut out) },
            PzStatus::PzOk
        );
        let json = take_string(out);
        assert!(json.contains("gamma"), "{json}");

        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { pz_relations_json(engine, b'y' as c_char, &mut out) },
            PzStatus::PzOk
        );
        let json = take_string(out);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v[1]["rules"][0]["lhs"], "zeta(Sigma[2,1])");
        unsafe { pz_engine_free(engine) };
    }

    #[test]
    fn null_handling() {
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { pz_reduce_composition(ptr::null_mut(), ptr::null(), &mut out) },
            PzStatus::PzNullPointer
        );
        assert_eq!(
            unsafe { pz_engine_new(5, ptr::null_mut()) },
            PzStatus::PzNullPointer
        );
        unsafe { pz_string_free(ptr::null_mut()) };
        unsafe { pz_engine_free(ptr::null_mut()) };
    }

    #[test]
    fn lyndon_and_numeric() {
        let mut out: *mut c_char = ptr::null_mut();
        assert_eq!(
            unsafe { pz_lyndon_words(b'x' as c_char, 3, &mut out) },
            PzStatus::PzOk
        );
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 5);

        let comp = CString::new("2").unwrap();
        let (mut value, mut err) = (0f64, 0f64);
        assert_eq!(
            unsafe { pz_mzv_estimate(comp.as_ptr(), 10_000, 1, &mut value, &mut err) },
            PzStatus::PzOk
        );
        assert!((value - 1.6449340668).abs() < 1e-6);
        assert!(err > 0.0);

        let mut g = 0f64;
        assert_eq!(unsafe { pz_euler_gamma(10_000, &mut g) }, PzStatus::PzOk);
        assert!((g - 0.5772156649).abs() < 1e-9);
    }
}
