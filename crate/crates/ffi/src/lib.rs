//! C ABI for the parayb toolkit: opaque handles, status codes, and a
//! thread-local last-error message. Every constructor has a matching
//! `_free`; strings returned by `_to_json` are released with
//! [`parayb_string_free`].

// the library error type carries full counterexamples; it only crosses
// this boundary once per call, right before being flattened to a status
#![allow(clippy::result_large_err)]

use parayb::braces::{brace_bullet, brace_shelf, brace_sigma_tau, cyclic_brace, SkewBrace};
use parayb::carrier::{Carrier, ParamFamily, ParamSubset};
use parayb::files::{FamilyFile, SolutionFile};
use parayb::shelves::{check_p_rack, check_p_shelf, shelf_solution, PShelf};
use parayb::solutions::{
    build_solution, check_ybe, classify, extract_shelf, ParamYBMap, YbeMethod,
};
use parayb::Error;
use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParaybStatus {
    Ok = 0,
    InvalidArgument = 1,
    NotAShelf = 2,
    NotARack = 3,
    NotAdmissible = 4,
    SigmaNotBijective = 5,
    NotASolution = 6,
    NotLeftNonDegenerate = 7,
    BudgetExceeded = 8,
    DimensionMismatch = 9,
    Json = 10,
    NullPointer = 11,
    Other = 12,
}

/// Classification bit flags for [`parayb_solution_classify`].
pub const PARAYB_FLAG_LEFT_NONDEGENERATE: u32 = 1;
pub const PARAYB_FLAG_NONDEGENERATE: u32 = 2;
pub const PARAYB_FLAG_INVERTIBLE: u32 = 4;
pub const PARAYB_FLAG_REVERSIBLE: u32 = 8;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid message").unwrap());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> ParaybStatus {
    match err {
        Error::NotAShelf(_) => ParaybStatus::NotAShelf,
        Error::NotARack(_) => ParaybStatus::NotARack,
        Error::NotAdmissible(_) => ParaybStatus::NotAdmissible,
        Error::SigmaNotBijective { .. } | Error::SigmaInvalid(_) => ParaybStatus::SigmaNotBijective,
        Error::NotASolution(_) => ParaybStatus::NotASolution,
        Error::NotLeftNonDegenerate { .. } => ParaybStatus::NotLeftNonDegenerate,
        Error::BudgetExceeded { .. } | Error::SizeGuard { .. } => ParaybStatus::BudgetExceeded,
        Error::DimensionMismatch { .. } => ParaybStatus::DimensionMismatch,
        Error::Json(_) => ParaybStatus::Json,
        Error::Invalid(_) => ParaybStatus::InvalidArgument,
        _ => ParaybStatus::Other,
    }
}

fn fail(err: Error) -> ParaybStatus {
    let s = status_of(&err);
    set_error(err.to_string());
    s
}

/// A skew brace handle.
pub struct ParaybBrace {
    inner: SkewBrace,
}

/// A parameter-indexed family handle (carrier + tables).
pub struct ParaybFamily {
    carrier: Carrier,
    fam: ParamFamily,
}

/// A parametric set-theoretic map handle.
pub struct ParaybSolution {
    carrier: Carrier,
    map: ParamYBMap,
}

/// Last error message for this thread, or NULL when no error occurred.
/// The pointer stays valid until the next failing call on this thread.
#[no_mangle]
pub extern "C" fn parayb_last_error() -> *const c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.as_ptr(),
        None => std::ptr::null(),
    })
}

/// Crate version as a static string.
#[no_mangle]
pub extern "C" fn parayb_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Release a string returned by a `_to_json` call.
///
/// # Safety
/// `s` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn parayb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Build the brace of invertible residues mod `2^m`.
///
/// # Safety
/// `out` must be a valid pointer to a `ParaybBrace*` slot.
#[no_mangle]
pub unsafe extern "C" fn parayb_brace_cyclic(m: u32, out: *mut *mut ParaybBrace) -> ParaybStatus {
    if out.is_null() {
        return ParaybStatus::NullPointer;
    }
    match cyclic_brace(m) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(ParaybBrace { inner }));
            ParaybStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `b` must be a pointer from [`parayb_brace_cyclic`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn parayb_brace_free(b: *mut ParaybBrace) {
    if !b.is_null() {
        drop(Box::from_raw(b));
    }
}

/// Carrier size of a brace.
///
/// # Safety
/// `b` must be a live brace handle.
#[no_mangle]
pub unsafe extern "C" fn parayb_brace_order(b: *const ParaybBrace) -> usize {
    if b.is_null() {
        return 0;
    }
    (*b).inner.n()
}

unsafe fn brace_derived(
    b: *const ParaybBrace,
    xi_label: i64,
    out: *mut *mut ParaybFamily,
    f: impl Fn(&SkewBrace, &ParamSubset, usize) -> parayb::Result<ParamFamily>,
) -> ParaybStatus {
    if b.is_null() || out.is_null() {
        return ParaybStatus::NullPointer;
    }
    let brace = &(*b).inner;
    let Some(xi) = brace.carrier.index_of(xi_label) else {
        set_error(format!("no carrier element labeled {xi_label}"));
        return ParaybStatus::InvalidArgument;
    };
    let y = ParamSubset::full(brace.n());
    match f(brace, &y, xi) {
        Ok(fam) => {
            *out = Box::into_raw(Box::new(ParaybFamily {
                carrier: brace.carrier.clone(),
                fam,
            }));
            ParaybStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Shelf operation the brace induces for the given twist element label.
///
/// # Safety
/// `b` must be a live brace handle and `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn parayb_brace_shelf(
    b: *const ParaybBrace,
    xi_label: i64,
    out: *mut *mut ParaybFamily,
) -> ParaybStatus {
    brace_derived(b, xi_label, out, |br, y, xi| {
        brace_shelf(br, y, xi).map(|s| s.op)
    })
}

/// Twist family the brace induces for the given twist element label.
///
/// # Safety
/// `b` must be a live brace handle and `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn parayb_brace_sigma(
    b: *const ParaybBrace,
    xi_label: i64,
    out: *mut *mut ParaybFamily,
) -> ParaybStatus {
    brace_derived(b, xi_label, out, |br, y, xi| {
        brace_sigma_tau(br, y, xi).map(|(s, _)| s)
    })
}

/// Decorated product the brace induces for the given twist element label.
///
/// # Safety
/// `b` must be a live brace handle and `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn parayb_brace_bullet(
    b: *const ParaybBrace,
    xi_label: i64,
    out: *mut *mut ParaybFamily,
) -> ParaybStatus {
    brace_derived(b, xi_label, out, brace_bullet)
}

/// # Safety
/// `f` must be a pointer from a family-producing call, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn parayb_family_free(f: *mut ParaybFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Parse a family from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated UTF-8 string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parayb_family_from_json(
    json: *const c_char,
    out: *mut *mut ParaybFamily,
) -> ParaybStatus {
    if json.is_null() || out.is_null() {
        return ParaybStatus::NullPointer;
    }
    let Ok(text) = CStr::from_ptr(json).to_str() else {
        set_error("input is not valid UTF-8".into());
        return ParaybStatus::InvalidArgument;
    };
    let parsed: Result<FamilyFile, _> = serde_json::from_str(text);
    match parsed {
        Ok(file) => match file.into_family() {
            Ok((carrier, fam)) => {
                *out = Box::into_raw(Box::new(ParaybFamily { carrier, fam }));
                ParaybStatus::Ok
            }
            Err(e) => fail(e),
        },
        Err(e) => {
            set_error(format!("malformed JSON: {e}"));
            ParaybStatus::Json
        }
    }
}

/// Serialize a family to its JSON form (release with
/// [`parayb_string_free`]).
///
/// # Safety
/// `f` must be a live family handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parayb_family_to_json(
    f: *const ParaybFamily,
    out: *mut *mut c_char,
) -> ParaybStatus {
    if f.is_null() || out.is_null() {
        return ParaybStatus::NullPointer;
    }
    let file = FamilyFile::from_family(&(*f).carrier, &(*f).fam);
    match serde_json::to_string(&file) {
        Ok(s) => {
            *out = CString::new(s).expect("json has no NUL").into_raw();
            ParaybStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            ParaybStatus::Json
        }
    }
}

/// Exhaustive self-distributivity check; with `rack` set, bijectivity of
/// the left translations is required too. `holds` receives the verdict.
///
/// # Safety
/// `f` must be a live family handle and `holds` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parayb_check_shelf(
    f: *const ParaybFamily,
    rack: bool,
    holds: *mut bool,
) -> ParaybStatus {
    if f.is_null() || holds.is_null() {
        return ParaybStatus::NullPointer;
    }
    let v = if rack {
        check_p_rack(&(*f).fam)
    } else {
        check_p_shelf(&(*f).fam)
    };
    *holds = v.holds;
    ParaybStatus::Ok
}

/// Diagonal solution of a verified shelf.
///
/// # Safety
/// `f` must be a live family handle and `out` a valid out-pointer.
#[no_mangle]
pub unsafe extern "C" fn parayb_shelf_solution(
    f: *const ParaybFamily,
    out: *mut *mut ParaybSolution,
) -> ParaybStatus {
    if f.is_null() || out.is_null() {
        return ParaybStatus::NullPointer;
    }
    match PShelf::new((*f).fam.clone()) {
        Ok(shelf) => {
            let map = shelf_solution(&shelf);
            *out = Box::into_raw(Box::new(ParaybSolution {
                carrier: (*f).carrier.clone(),
                map,
            }));
            ParaybStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// Twisted solution of a shelf and an admissible twist family.
///
/// # Safety
/// `shelf` and `sigma` must be live family handles, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parayb_build_solution(
    shelf: *const ParaybFamily,
    sigma: *const ParaybFamily,
    out: *mut *mut ParaybSolution,
) -> ParaybStatus {
    if shelf.is_null() || sigma.is_null() || out.is_null() {
        return ParaybStatus::NullPointer;
    }
    let sh = match PShelf::new((*shelf).fam.clone()) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    match build_solution(&sh, &(*sigma).fam) {
        Ok(map) => {
            *out = Box::into_raw(Box::new(ParaybSolution {
                carrier: (*shelf).carrier.clone(),
                map,
            }));
            ParaybStatus::Ok
        }
        Err(e) => fail(e),
    }
}

/// # Safety
/// `s` must be a pointer from a solution-producing call, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn parayb_solution_free(s: *mut ParaybSolution) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Parse a solution from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated UTF-8 string; `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parayb_solution_from_json(
    json: *const c_char,
    out: *mut *mut ParaybSolution,
) -> ParaybStatus {
    if json.is_null() || out.is_null() {
        return ParaybStatus::NullPointer;
    }
    let Ok(text) = CStr::from_ptr(json).to_str() else {
        set_error("input is not valid UTF-8".into());
        return ParaybStatus::InvalidArgument;
    };
    let parsed: Result<SolutionFile, _> = serde_json::from_str(text);
    match parsed {
        Ok(file) => match file.into_solution() {
            Ok((carrier, map)) => {
                *out = Box::into_raw(Box::new(ParaybSolution { carrier, map }));
                ParaybStatus::Ok
            }
            Err(e) => fail(e),
        },
        Err(e) => {
            set_error(format!("malformed JSON: {e}"));
            ParaybStatus::Json
        }
    }
}

/// Serialize a solution to its JSON form (release with
/// [`parayb_string_free`]).
///
/// # Safety
/// `s` must be a live solution handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parayb_solution_to_json(
    s: *const ParaybSolution,
    out: *mut *mut c_char,
) -> ParaybStatus {
    if s.is_null() || out.is_null() {
        return ParaybStatus::NullPointer;
    }
    let file = SolutionFile::from_solution(&(*s).carrier, &(*s).map);
    match serde_json::to_string(&file) {
        Ok(text) => {
            *out = CString::new(text).expect("json has no NUL").into_raw();
            ParaybStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            ParaybStatus::Json
        }
    }
}

/// Exhaustive Yang-Baxter verification.
/// `method`: 0 = direct, 1 = componentwise, 2 = both.
///
/// # Safety
/// `s` must be a live solution handle and `holds` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parayb_solution_check_ybe(
    s: *const ParaybSolution,
    method: u32,
    holds: *mut bool,
) -> ParaybStatus {
    if s.is_null() || holds.is_null() {
        return ParaybStatus::NullPointer;
    }
    let m = match method {
        0 => YbeMethod::Direct,
        1 => YbeMethod::Components,
        2 => YbeMethod::Both,
        _ => {
            set_error(format!("unknown method {method}"));
            return ParaybStatus::InvalidArgument;
        }
    };
    *holds = check_ybe(&(*s).map, m).holds;
    ParaybStatus::Ok
}

/// Degeneracy/reversibility flags as a bitmask of the `PARAYB_FLAG_*`
/// constants.
///
/// # Safety
/// `s` must be a live solution handle and `flags` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn parayb_solution_classify(
    s: *const ParaybSolution,
    flags: *mut u32,
) -> ParaybStatus {
    if s.is_null() || flags.is_null() {
        return ParaybStatus::NullPointer;
    }
    let c = classify(&(*s).map);
    let mut f = 0u32;
    if c.left_nondegenerate {
        f |= PARAYB_FLAG_LEFT_NONDEGENERATE;
    }
    if c.nondegenerate {
        f |= PARAYB_FLAG_NONDEGENERATE;
    }
    if c.invertible {
        f |= PARAYB_FLAG_INVERTIBLE;
    }
    if c.reversible {
        f |= PARAYB_FLAG_REVERSIBLE;
    }
    *flags = f;
    ParaybStatus::Ok
}

/// Factor a left non-degenerate solution: writes the shelf and twist
/// family handles.
///
/// # Safety
/// `s` must be a live solution handle; both out-pointers valid.
#[no_mangle]
pub unsafe extern "C" fn parayb_solution_extract_shelf(
    s: *const ParaybSolution,
    shelf_out: *mut *mut ParaybFamily,
    sigma_out: *mut *mut ParaybFamily,
) -> ParaybStatus {
    if s.is_null() || shelf_out.is_null() || sigma_out.is_null() {
        return ParaybStatus::NullPointer;
    }
    match extract_shelf(&(*s).map) {
        Ok((shelf, sigma)) => {
            *shelf_out = Box::into_raw(Box::new(ParaybFamily {
                carrier: (*s).carrier.clone(),
                fam: shelf.op,
            }));
            *sigma_out = Box::into_raw(Box::new(ParaybFamily {
                carrier: (*s).carrier.clone(),
                fam: sigma,
            }));
            ParaybStatus::Ok
        }
        Err(e) => fail(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_brace_shelf_round_trip_through_the_abi() {
        unsafe {
            let mut brace: *mut ParaybBrace = std::ptr::null_mut();
            assert_eq!(parayb_brace_cyclic(3, &mut brace), ParaybStatus::Ok);
            assert_eq!(parayb_brace_order(brace), 4);

            let mut shelf: *mut ParaybFamily = std::ptr::null_mut();
            assert_eq!(parayb_brace_shelf(brace, 3, &mut shelf), ParaybStatus::Ok);
            let mut holds = false;
            assert_eq!(
                parayb_check_shelf(shelf, true, &mut holds),
                ParaybStatus::Ok
            );
            assert!(holds);

            let mut sigma: *mut ParaybFamily = std::ptr::null_mut();
            assert_eq!(parayb_brace_sigma(brace, 3, &mut sigma), ParaybStatus::Ok);

            let mut sol: *mut ParaybSolution = std::ptr::null_mut();
            assert_eq!(
                parayb_build_solution(shelf, sigma, &mut sol),
                ParaybStatus::Ok
            );
            let mut ok = false;
            assert_eq!(parayb_solution_check_ybe(sol, 2, &mut ok), ParaybStatus::Ok);
            assert!(ok);
            let mut flags = 0u32;
            assert_eq!(parayb_solution_classify(sol, &mut flags), ParaybStatus::Ok);
            assert_ne!(flags & PARAYB_FLAG_LEFT_NONDEGENERATE, 0);
            assert_ne!(flags & PARAYB_FLAG_INVERTIBLE, 0);
            assert_eq!(flags & PARAYB_FLAG_REVERSIBLE, 0);

            // round-trip through JSON
            let mut text: *mut c_char = std::ptr::null_mut();
            assert_eq!(parayb_solution_to_json(sol, &mut text), ParaybStatus::Ok);
            let mut sol2: *mut ParaybSolution = std::ptr::null_mut();
            assert_eq!(parayb_solution_from_json(text, &mut sol2), ParaybStatus::Ok);
            parayb_string_free(text);

            // extraction round-trip
            let mut eshelf: *mut ParaybFamily = std::ptr::null_mut();
            let mut esigma: *mut ParaybFamily = std::ptr::null_mut();
            assert_eq!(
                parayb_solution_extract_shelf(sol2, &mut eshelf, &mut esigma),
                ParaybStatus::Ok
            );

            parayb_family_free(shelf);
            parayb_family_free(sigma);
            parayb_family_free(eshelf);
            parayb_family_free(esigma);
            parayb_solution_free(sol);
            parayb_solution_free(sol2);
            parayb_brace_free(brace);
        }
    }

    #[test]
    fn errors_set_status_and_message() {
        unsafe {
            let mut brace: *mut ParaybBrace = std::ptr::null_mut();
            assert_eq!(
                parayb_brace_cyclic(0, &mut brace),
                ParaybStatus::InvalidArgument
            );
            assert!(!parayb_last_error().is_null());

            assert_eq!(parayb_brace_cyclic(3, &mut brace), ParaybStatus::Ok);
            let mut fam: *mut ParaybFamily = std::ptr::null_mut();
            // label 2 is not an odd residue
            assert_eq!(
                parayb_brace_shelf(brace, 2, &mut fam),
                ParaybStatus::InvalidArgument
            );
            let msg = CStr::from_ptr(parayb_last_error()).to_str().unwrap();
            assert!(msg.contains("labeled 2"), "{msg}");
            parayb_brace_free(brace);
        }
    }

    #[test]
    fn malformed_json_is_reported() {
        unsafe {
            let bad = CString::new("{not json").unwrap();
            let mut fam: *mut ParaybFamily = std::ptr::null_mut();
            assert_eq!(
                parayb_family_from_json(bad.as_ptr(), &mut fam),
                ParaybStatus::Json
            );
        }
    }

    #[test]
    fn version_string_is_static() {
        let v = unsafe { CStr::from_ptr(parayb_version()) };
        assert!(!v.to_str().unwrap().is_empty());
    }

    #[test]
    fn generated_header_exists() {
        let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/parayb.h");
        let text = std::fs::read_to_string(header).expect("header generated at build time");
        assert!(text.contains("parayb_brace_cyclic"));
        assert!(text.contains("ParaybStatus"));
    }
}
