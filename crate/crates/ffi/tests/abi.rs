use std::ffi::{CStr, CString};
use std::ptr;

use braidchain_ffi::*;

fn take_string(p: *mut std::ffi::c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { bc_string_free(p) };
    s
}

fn last_error() -> String {
    let p = bc_last_error();
    assert!(!p.is_null(), "expected an error message");
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
}

#[test]
fn braid_matrix_lifecycle() {
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { bc_braid_matrix_new(BC_FAMILY_SO, 3, &mut m) },
        BcStatus::Ok
    );
    assert!(bc_last_error().is_null());

    let mut holds = false;
    assert_eq!(
        unsafe { bc_braid_matrix_check(m, &mut holds) },
        BcStatus::Ok
    );
    assert!(holds);

    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { bc_braid_matrix_dump(m, false, &mut s) },
        BcStatus::Ok
    );
    let dump = take_string(s);
    assert!(dump.starts_with("dim=9\n"));

    let mut count = 0usize;
    assert_eq!(
        unsafe { bc_braid_matrix_projector_count(m, &mut count) },
        BcStatus::Ok
    );
    assert_eq!(count, 3);
    let mut ranks = Vec::new();
    for i in 0..count {
        let mut rank = 0usize;
        let mut s = ptr::null_mut();
        assert_eq!(
            unsafe { bc_braid_matrix_projector(m, i, &mut rank, &mut s) },
            BcStatus::Ok
        );
        take_string(s);
        ranks.push(rank);
    }
    assert_eq!(ranks, [5, 3, 1]);

    let mut rank = 0usize;
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { bc_braid_matrix_projector(m, 3, &mut rank, &mut s) },
        BcStatus::InvalidArgument
    );
    assert!(s.is_null());
    unsafe { bc_braid_matrix_free(m) };
}

#[test]
fn error_codes() {
    let mut m = ptr::null_mut();
    assert_eq!(
        unsafe { bc_braid_matrix_new(BC_FAMILY_SP, 3, &mut m) },
        BcStatus::InvalidGroup
    );
    assert!(m.is_null());
    assert!(last_error().contains("Sp requires even N"));

    assert_eq!(
        unsafe { bc_braid_matrix_new(9, 3, &mut m) },
        BcStatus::InvalidGroup
    );
    assert_eq!(
        unsafe { bc_braid_matrix_new(BC_FAMILY_SL, 2, ptr::null_mut()) },
        BcStatus::NullPointer
    );

    let mut p = ptr::null_mut();
    let parity = [0u8];
    assert_eq!(
        unsafe { bc_presentation_chain(BC_FAMILY_SP, 4, parity.as_ptr(), 1, 1, false, &mut p) },
        BcStatus::Inadmissible
    );
    assert!(last_error().contains("no satisfactory definitions"));
    let bad = [2u8];
    assert_eq!(
        unsafe { bc_presentation_chain(BC_FAMILY_SL, 2, bad.as_ptr(), 1, 1, false, &mut p) },
        BcStatus::InvalidArgument
    );

    // A success clears the previous message.
    assert_eq!(
        unsafe { bc_braid_matrix_new(BC_FAMILY_SL, 2, &mut m) },
        BcStatus::Ok
    );
    assert!(bc_last_error().is_null());
    unsafe { bc_braid_matrix_free(m) };

    unsafe {
        bc_braid_matrix_free(ptr::null_mut());
        bc_presentation_free(ptr::null_mut());
        bc_string_free(ptr::null_mut());
    }
}

#[test]
fn chain_poincare_series() {
    let mut p = ptr::null_mut();
    let parities = [0u8, 1];
    assert_eq!(
        unsafe { bc_presentation_chain(BC_FAMILY_SL, 2, parities.as_ptr(), 2, 1, true, &mut p) },
        BcStatus::Ok
    );
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { bc_presentation_dump(p, &mut s) }, BcStatus::Ok);
    assert!(take_string(s).contains("A+[2,1]"));

    let mut counts = [0u64; 5];
    let mut matches = false;
    assert_eq!(
        unsafe { bc_presentation_poincare(p, counts.as_mut_ptr(), counts.len(), &mut matches) },
        BcStatus::Ok
    );
    // Two bosonic and two fermionic modes on each side.
    let classical: Vec<u64> = (0..5u64)
        .map(|d| {
            (0..=d.min(4))
                .map(|k| binom(4 + d - k - 1, d - k) * binom(4, k))
                .sum()
        })
        .collect();
    assert_eq!(counts.to_vec(), classical);
    assert!(matches);
    unsafe { bc_presentation_free(p) };
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn glm_presentation() {
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { bc_presentation_glm(2, 2, 1, false, &mut p) },
        BcStatus::Ok
    );
    let mut counts = [0u64; 4];
    let mut matches = false;
    assert_eq!(
        unsafe { bc_presentation_poincare(p, counts.as_mut_ptr(), 4, &mut matches) },
        BcStatus::Ok
    );
    assert_eq!(counts, [1, 8, 28, 56]);
    assert!(matches);
    unsafe { bc_presentation_free(p) };
}

#[test]
fn verify_report() {
    let suite = CString::new("lemma1").unwrap();
    let mut passed = false;
    let mut s = ptr::null_mut();
    let status = unsafe { bc_verify(suite.as_ptr(), BC_FAMILY_SO, 3, 0, 0, &mut passed, &mut s) };
    assert_eq!(status, BcStatus::Ok);
    assert!(passed);
    let json: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(json["schema"], 1);
    assert_eq!(json["checks"].as_array().unwrap().len(), 2);

    let bogus = CString::new("nonsense").unwrap();
    let status = unsafe { bc_verify(bogus.as_ptr(), BC_FAMILY_ANY, 0, 0, 0, &mut passed, &mut s) };
    assert_eq!(status, BcStatus::InvalidArgument);
    assert!(last_error().contains("unknown suite"));
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(bc_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
