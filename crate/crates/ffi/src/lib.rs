//! C ABI over `braidchain`.
//!
//! Conventions:
//! - every fallible call returns a [`BcStatus`]; on failure a message is
//!   available from [`bc_last_error`] on the same thread;
//! - objects are opaque handles released with their `_free` function;
//! - strings returned through `char **out` are owned by the caller and must
//!   be released with [`bc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use braidchain::braid::{check_braid, Family, GroupSpec};
use braidchain::pbw::analyze;
use braidchain::relations::{
    gen_chain_with, gen_glm, AlgebraPresentation, ChainParams, CopyFlavor, GroupData, Sign,
};
use braidchain::suite::{run_suite, SuiteConfig, SuiteName};
use braidchain::Error;

pub const BC_FAMILY_SL: u32 = 0;
pub const BC_FAMILY_SO: u32 = 1;
pub const BC_FAMILY_SP: u32 = 2;
/// Passed as a family filter to mean "any".
pub const BC_FAMILY_ANY: u32 = 0xFFFF_FFFF;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGroup = 3,
    Inadmissible = 4,
    NotConfluent = 5,
    Computation = 6,
    Panic = 7,
}

/// A braid matrix together with its inverse and spectral projectors.
pub struct BcBraidMatrix {
    data: GroupData,
}

/// Generators and quadratic relations of an algebra.
pub struct BcPresentation {
    pres: AlgebraPresentation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(BcStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidGroup(_) => BcStatus::InvalidGroup,
            Error::Inadmissible { .. } => BcStatus::Inadmissible,
            Error::NotConfluent(_) => BcStatus::NotConfluent,
            Error::Config(_) | Error::Parse { .. } => BcStatus::InvalidArgument,
            _ => BcStatus::Computation,
        };
        Fail(code, e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(BcStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Fail {
    Fail(BcStatus::InvalidArgument, msg.into())
}

/// Runs `f`, records any error or panic, and maps it to a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BcStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BcStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("internal panic".into());
            BcStatus::Panic
        }
    }
}

fn family(code: u32) -> Result<Family, Fail> {
    match code {
        BC_FAMILY_SL => Ok(Family::SL),
        BC_FAMILY_SO => Ok(Family::SO),
        BC_FAMILY_SP => Ok(Family::Sp),
        _ => Err(Fail(
            BcStatus::InvalidGroup,
            format!("unknown family code {code}"),
        )),
    }
}

fn sign(parity: u8) -> Result<Sign, Fail> {
    match parity {
        0 => Ok(Sign::Weyl),
        1 => Ok(Sign::Clifford),
        p => Err(invalid(format!("parity must be 0 or 1, got {p}"))),
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn give_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let out = out_ref(out, "out")?;
    let c =
        CString::new(s).map_err(|_| Fail(BcStatus::Computation, "string contains NUL".into()))?;
    *out = c.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn bc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn bc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the braid matrix for `family_code` (`BC_FAMILY_*`) with defining
/// dimension `n`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_braid_matrix_new(
    family_code: u32,
    n: usize,
    out: *mut *mut BcBraidMatrix,
) -> BcStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let group = GroupSpec::new(family(family_code)?, n)?;
        let data = GroupData::build(group)?;
        *out = Box::into_raw(Box::new(BcBraidMatrix { data }));
        Ok(())
    })
}

/// # Safety
/// `m` must come from [`bc_braid_matrix_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bc_braid_matrix_free(m: *mut BcBraidMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Sparse dump of the matrix (`inverse = false`) or its inverse.
///
/// # Safety
/// `m` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bc_braid_matrix_dump(
    m: *const BcBraidMatrix,
    inverse: bool,
    out: *mut *mut c_char,
) -> BcStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        let mat = if inverse {
            &m.data.inverse
        } else {
            m.data.rhat()
        };
        give_string(out, mat.dump())
    })
}

/// Number of spectral projectors.
///
/// # Safety
/// `m` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bc_braid_matrix_projector_count(
    m: *const BcBraidMatrix,
    out: *mut usize,
) -> BcStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        *out_ref(out, "out")? = m.data.projectors.projectors.len();
        Ok(())
    })
}

/// Rank and sparse dump of projector `index`.
///
/// # Safety
/// `m`, `rank` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bc_braid_matrix_projector(
    m: *const BcBraidMatrix,
    index: usize,
    rank: *mut usize,
    out: *mut *mut c_char,
) -> BcStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        let (_, p) = m
            .data
            .projectors
            .projectors
            .get(index)
            .ok_or_else(|| invalid(format!("projector index {index} out of range")))?;
        let rank = out_ref(rank, "rank")?;
        give_string(out, p.dump())?;
        *rank = p.rank();
        Ok(())
    })
}

/// Checks the braid equation for the matrix and for its inverse.
///
/// # Safety
/// `m` and `holds` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bc_braid_matrix_check(
    m: *const BcBraidMatrix,
    holds: *mut bool,
) -> BcStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("matrix"))?;
        let n = m.data.group().n;
        *out_ref(holds, "holds")? =
            check_braid(m.data.rhat(), n) && check_braid(&m.data.inverse, n);
        Ok(())
    })
}

/// Chain of `copies` copies with per-copy `parities` (0 Weyl, 1 Clifford) and
/// a common `variant` (1 or -1). `generic_couplings` selects non-unit
/// couplings between copies.
///
/// # Safety
/// `parities` must point to `copies` bytes; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bc_presentation_chain(
    family_code: u32,
    n: usize,
    parities: *const u8,
    copies: usize,
    variant: i8,
    generic_couplings: bool,
    out: *mut *mut BcPresentation,
) -> BcStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        if parities.is_null() {
            return Err(null("parities"));
        }
        if copies == 0 {
            return Err(invalid("copies must be at least 1"));
        }
        let group = GroupSpec::new(family(family_code)?, n)?;
        let flavors = std::slice::from_raw_parts(parities, copies)
            .iter()
            .map(|&p| Ok(CopyFlavor::new(sign(p)?, variant)))
            .collect::<Result<Vec<_>, Fail>>()?;
        let mut params = ChainParams::from_flavors(flavors);
        if generic_couplings {
            params = params.with_generic_couplings();
        }
        let pres = gen_chain_with(&GroupData::build(group)?, &params)?;
        *out = Box::into_raw(Box::new(BcPresentation { pres }));
        Ok(())
    })
}

/// `GL(m) x SL(n)`-covariant algebra.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bc_presentation_glm(
    m: usize,
    n: usize,
    parity: u8,
    inverse_variant: bool,
    out: *mut *mut BcPresentation,
) -> BcStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let pres = gen_glm(m, n, sign(parity)?, inverse_variant)?;
        *out = Box::into_raw(Box::new(BcPresentation { pres }));
        Ok(())
    })
}

/// # Safety
/// `p` must come from a `bc_presentation_*` constructor and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn bc_presentation_free(p: *mut BcPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// One relation per line.
///
/// # Safety
/// `p` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn bc_presentation_dump(
    p: *const BcPresentation,
    out: *mut *mut c_char,
) -> BcStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("presentation"))?;
        give_string(out, p.pres.dump())
    })
}

/// Dimensions of the graded pieces in degrees `0..len`, written to `counts`.
/// `matches_classical` reports whether every degree agrees with the
/// undeformed algebra. Returns `BC_STATUS_NOT_CONFLUENT` if the rewriting
/// system has unresolved overlaps.
///
/// # Safety
/// `counts` must hold `len` elements; `p` and `matches_classical` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bc_presentation_poincare(
    p: *const BcPresentation,
    counts: *mut u64,
    len: usize,
    matches_classical: *mut bool,
) -> BcStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("presentation"))?;
        if counts.is_null() {
            return Err(null("counts"));
        }
        let matches = out_ref(matches_classical, "matches_classical")?;
        if len == 0 {
            return Err(invalid("len must be at least 1"));
        }
        let a = analyze(&p.pres, len - 1)?;
        let series = a.series.ok_or_else(|| {
            Fail(
                BcStatus::NotConfluent,
                format!("{} unresolved overlaps", a.confluence.unresolved.len()),
            )
        })?;
        let out = std::slice::from_raw_parts_mut(counts, len);
        for (slot, row) in out.iter_mut().zip(&series.rows) {
            *slot = u64::try_from(row.deformed)
                .map_err(|_| Fail(BcStatus::Computation, "count overflows u64".into()))?;
        }
        *matches = series.all_match();
        Ok(())
    })
}

/// Runs a verification suite (`"all"`, `"braid"`, `"lemma1"`, `"chain"`,
/// `"glm"`, `"star"`, `"series"`) and returns the JSON report. Filters use
/// `BC_FAMILY_ANY` / 0 for "unset"; `max_degree` 0 selects the default.
///
/// # Safety
/// `suite` must be a NUL-terminated string; `all_passed` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bc_verify(
    suite: *const c_char,
    family_code: u32,
    n: usize,
    m: usize,
    max_degree: usize,
    all_passed: *mut bool,
    out: *mut *mut c_char,
) -> BcStatus {
    guard(|| {
        if suite.is_null() {
            return Err(null("suite"));
        }
        let name: SuiteName = CStr::from_ptr(suite)
            .to_str()
            .map_err(|_| invalid("suite is not UTF-8"))?
            .parse()?;
        let passed = out_ref(all_passed, "all_passed")?;
        let mut cfg = SuiteConfig::new(name);
        if family_code != BC_FAMILY_ANY {
            cfg.family = Some(family(family_code)?);
        }
        cfg.n = (n != 0).then_some(n);
        cfg.m = (m != 0).then_some(m);
        if max_degree != 0 {
            cfg.max_degree = max_degree;
        }
        let report = run_suite(&cfg)?;
        give_string(out, report.to_json())?;
        *passed = report.all_passed();
        Ok(())
    })
}
