use std::ffi::{CStr, CString};
use std::ptr;

use eqdomain_ffi::*;

struct Handle(*mut EqdSemigroup);

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { eqd_semigroup_free(self.0) }
    }
}

fn new(order: usize, cells: &[u32]) -> Result<Handle, (EqdStatus, String)> {
    let mut out = ptr::null_mut();
    let status = unsafe { eqd_semigroup_new(order, cells.as_ptr(), &mut out) };
    if status == EqdStatus::Ok {
        Ok(Handle(out))
    } else {
        assert!(out.is_null());
        Err((status, last_error()))
    }
}

fn last_error() -> String {
    let p = eqd_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

const LEFT_ZERO: [u32; 4] = [0, 0, 1, 1];
const Z2: [u32; 4] = [0, 1, 1, 0];

#[test]
fn construction_errors_are_reported() {
    let (status, msg) = new(2, &[1, 1, 0, 0]).err().unwrap();
    assert_eq!(status, EqdStatus::NotAssociative);
    assert!(msg.contains("(0, 0, 0)"), "{msg}");
    let (status, _) = new(2, &[0, 2, 1, 1]).err().unwrap();
    assert_eq!(status, EqdStatus::InvalidTable);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { eqd_semigroup_new(0, LEFT_ZERO.as_ptr(), &mut out) }, EqdStatus::InvalidTable);
    assert_eq!(unsafe { eqd_semigroup_new(2, ptr::null(), &mut out) }, EqdStatus::NullPointer);
}

#[test]
fn parse_and_order() {
    let text = CString::new("# comment\n3\n0 0 0\n0 0 0\n0 0 0\n").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { eqd_semigroup_parse(text.as_ptr(), &mut out) }, EqdStatus::Ok);
    let h = Handle(out);
    assert_eq!(unsafe { eqd_semigroup_order(h.0) }, 3);
    assert_eq!(unsafe { eqd_semigroup_order(ptr::null()) }, 0);

    let bad = CString::new("2\n1 1\n0 0\n").unwrap();
    assert_eq!(unsafe { eqd_semigroup_parse(bad.as_ptr(), &mut out) }, EqdStatus::NotAssociative);
    let empty = CString::new("").unwrap();
    assert_eq!(unsafe { eqd_semigroup_parse(empty.as_ptr(), &mut out) }, EqdStatus::InvalidTable);
}

#[test]
fn classification_and_profiles() {
    let h = new(2, &Z2).unwrap();
    let mut c = EqdClassification { tag: EqdClassTag::Trivial, a: 0, b: 0 };
    assert_eq!(unsafe { eqd_classify(h.0, &mut c) }, EqdStatus::Ok);
    assert_eq!(c, EqdClassification { tag: EqdClassTag::Unbounded, a: 1, b: EQD_NONE });

    let (mut index, mut period) = (0, 0);
    assert_eq!(unsafe { eqd_element_profile(h.0, 1, &mut index, &mut period) }, EqdStatus::Ok);
    assert_eq!((index, period), (1, 2));
    assert_eq!(unsafe { eqd_element_profile(h.0, 2, &mut index, &mut period) }, EqdStatus::InvalidArgument);

    let lz = new(2, &LEFT_ZERO).unwrap();
    assert_eq!(unsafe { eqd_classify(lz.0, &mut c) }, EqdStatus::Ok);
    assert_eq!(c.tag, EqdClassTag::IdempotentNowhereCommutative);

    let null = new(2, &[0, 0, 0, 0]).unwrap();
    assert_eq!(unsafe { eqd_classify(null.0, &mut c) }, EqdStatus::Ok);
    assert_eq!(c, EqdClassification { tag: EqdClassTag::BoundedNonIdempotent, a: 1, b: EQD_NONE });
}

#[test]
fn monogenic_equality() {
    assert!(eqd_monogenic_equal(2, 3, 5, 8));
    assert!(!eqd_monogenic_equal(2, 3, 1, 4));
    assert!(!eqd_monogenic_equal(0, 3, 5, 5));
}

#[test]
fn check_returns_a_json_report() {
    let h = new(2, &LEFT_ZERO).unwrap();
    let mut json = ptr::null_mut();
    let mut ed = true;
    assert_eq!(unsafe { eqd_check_semigroup(h.0, 1_000_000, &mut json, &mut ed) }, EqdStatus::Ok);
    assert!(!ed);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { eqd_string_free(json) };
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["lemma"], "1.1");
    assert_eq!(v["separating_point"], serde_json::json!([0, 1, 1]));

    let z2 = new(2, &Z2).unwrap();
    assert_eq!(unsafe { eqd_check_semigroup(z2.0, 3, &mut json, &mut ed) }, EqdStatus::BudgetExceeded);
    assert!(last_error().contains("budget"));
}

#[test]
fn term_functions_and_algebraic_sets() {
    let h = new(2, &[0, 0, 0, 1]).unwrap();
    let mut count = 0;
    assert_eq!(unsafe { eqd_term_function_count(h.0, 2, 1_000_000, &mut count) }, EqdStatus::Ok);
    assert_eq!(count, 3);

    let lz = new(2, &LEFT_ZERO).unwrap();
    // m3 = {p0 = p1 or p0 = p2} over the left-zero band, big-endian order.
    let m3: Vec<u8> = (0..8usize)
        .map(|c| {
            let p = [c >> 2 & 1, c >> 1 & 1, c & 1];
            (p[0] == p[1] || p[0] == p[2]) as u8
        })
        .collect();
    let (mut algebraic, mut code) = (true, 0);
    let status = unsafe { eqd_is_algebraic(lz.0, 3, m3.as_ptr(), m3.len(), 1_000_000, &mut algebraic, &mut code) };
    assert_eq!(status, EqdStatus::Ok);
    assert!(!algebraic);
    assert_eq!(code, 0b011);

    let diagonal = [1u8, 0, 0, 1];
    let status = unsafe { eqd_is_algebraic(lz.0, 2, diagonal.as_ptr(), 4, 1_000_000, &mut algebraic, &mut code) };
    assert_eq!(status, EqdStatus::Ok);
    assert!(algebraic);
    assert_eq!(code, EQD_NONE);

    let status = unsafe { eqd_is_algebraic(lz.0, 2, diagonal.as_ptr(), 3, 1_000_000, &mut algebraic, &mut code) };
    assert_eq!(status, EqdStatus::InvalidArgument);
}

#[test]
fn enumeration_counts() {
    let mut n = 0;
    for (order, mode, expected) in [
        (2, EqdMode::Raw, 8),
        (3, EqdMode::Raw, 113),
        (3, EqdMode::UpToIso, 24),
        (3, EqdMode::UpToIsoAndAnti, 18),
    ] {
        assert_eq!(unsafe { eqd_enumerate_count(order, mode, &mut n) }, EqdStatus::Ok);
        assert_eq!(n, expected, "order {order} {mode:?}");
    }
    assert_eq!(unsafe { eqd_enumerate_count(6, EqdMode::Raw, &mut n) }, EqdStatus::InvalidArgument);
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/eqdomain.h");
    for name in [
        "eqd_last_error",
        "eqd_semigroup_new",
        "eqd_semigroup_parse",
        "eqd_semigroup_free",
        "eqd_semigroup_order",
        "eqd_classify",
        "eqd_element_profile",
        "eqd_monogenic_equal",
        "eqd_check_semigroup",
        "eqd_term_function_count",
        "eqd_is_algebraic",
        "eqd_enumerate_count",
        "eqd_string_free",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct EqdSemigroup EqdSemigroup;"));
}
