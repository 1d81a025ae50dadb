use std::ffi::{c_char, c_int, CStr, CString};
use std::ptr;

use branchkit_ffi::*;

fn cs(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
    bk_string_free(s);
    out
}

unsafe fn last_error() -> String {
    CStr::from_ptr(bk_last_error()).to_str().unwrap().to_owned()
}

#[test]
fn quat_roundtrip() {
    unsafe {
        let mut ctx = ptr::null_mut();
        assert_eq!(bk_quat_context_new(cs("su2_n:2").as_ptr(), &mut ctx), BkStatus::Ok);
        assert_eq!(bk_quat_context_d(ctx), 2);
        // rho of the small system of su(2,2), one step inside it
        let lam = cs("3/2,1/2,-1/2,-3/2");
        let mut t = ptr::null_mut();
        let st = bk_quat_branch(ctx, lam.as_ptr(), 4, &mut t);
        if st != BkStatus::Ok {
            panic!("{}", last_error());
        }
        let n = bk_table_len(t);
        assert!(n > 0);
        let mut mu: *const c_char = ptr::null();
        let mut mult: *const c_char = ptr::null();
        assert_eq!(bk_table_entry(t, 0, &mut mu, &mut mult), BkStatus::Ok);
        let mu_s = CStr::from_ptr(mu).to_owned();
        let mult_s = CStr::from_ptr(mult).to_str().unwrap().to_owned();
        let mut m = ptr::null_mut();
        assert_eq!(bk_table_multiplicity(t, mu_s.as_ptr(), &mut m), BkStatus::Ok);
        assert_eq!(take(m), mult_s);
        assert_eq!(bk_table_entry(t, n, &mut mu, &mut mult), BkStatus::Structural);
        let mut js = ptr::null_mut();
        assert_eq!(bk_table_to_json(t, &mut js), BkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(js)).unwrap();
        assert_eq!(v["entries"].as_array().unwrap().len(), n);
        bk_table_free(t);

        let mut agree: c_int = 0;
        let mut rep = ptr::null_mut();
        assert_eq!(bk_quat_oracle_check(ctx, lam.as_ptr(), 4, 10, &mut agree, &mut rep), BkStatus::Ok);
        assert_eq!(agree, 1, "{}", take(rep));
        bk_quat_context_free(ctx);
    }
}

#[test]
fn sp1q_roundtrip() {
    unsafe {
        let mut ctx = ptr::null_mut();
        assert_eq!(bk_sp1q_context_new(2, &mut ctx), BkStatus::Ok);
        let lam = cs("3,2,1");
        let mut t = ptr::null_mut();
        assert_eq!(bk_sp1q_branch(ctx, lam.as_ptr(), 3, &mut t), BkStatus::Ok);
        assert_eq!(bk_table_len(t), 4);
        bk_table_free(t);
        let mut agree: c_int = 0;
        let mut rep = ptr::null_mut();
        assert_eq!(bk_sp1q_oracle_check(ctx, lam.as_ptr(), 3, 10, &mut agree, &mut rep), BkStatus::Ok);
        bk_string_free(rep);
        assert_eq!(agree, 1);
        bk_sp1q_context_free(ctx);
    }
}

#[test]
fn error_codes() {
    unsafe {
        let mut ctx = ptr::null_mut();
        assert_eq!(bk_quat_context_new(cs("bogus").as_ptr(), &mut ctx), BkStatus::Config);
        assert!(!last_error().is_empty());
        assert_eq!(bk_quat_context_new(ptr::null(), &mut ctx), BkStatus::NullArgument);
        assert_eq!(bk_quat_context_new(cs("g2_2").as_ptr(), ptr::null_mut()), BkStatus::NullArgument);
        assert_eq!(bk_quat_context_new(cs("g2_2").as_ptr(), &mut ctx), BkStatus::Ok);
        let mut t = ptr::null_mut();
        assert_eq!(bk_quat_branch(ctx, cs("1,2").as_ptr(), 3, &mut t), BkStatus::Structural);
        assert_eq!(bk_quat_branch(ctx, cs("x,y,z").as_ptr(), 3, &mut t), BkStatus::Structural);
        assert_eq!(bk_quat_branch(ctx, cs("1,3,-4").as_ptr(), 3, &mut t), BkStatus::Domain);
        assert!(last_error().contains("dominant"));
        assert_eq!(bk_quat_branch(ctx, [0xffu8, 0].as_ptr().cast(), 3, &mut t), BkStatus::InvalidUtf8);
        assert!(t.is_null());
        bk_quat_context_free(ctx);
        bk_quat_context_free(ptr::null_mut());
        bk_table_free(ptr::null_mut());
        bk_string_free(ptr::null_mut());
        assert_eq!(bk_table_len(ptr::null()), 0);
        let mut ok: c_int = 1;
        assert_eq!(bk_admissible_so3(3, &mut ok), BkStatus::Ok);
        assert_eq!(ok, 0);
        assert_eq!(bk_admissible_so3(0, &mut ok), BkStatus::Config);
        let mut sp = ptr::null_mut();
        assert_eq!(bk_sp1q_context_new(1, &mut sp), BkStatus::Config);
    }
}

#[test]
fn hermitian() {
    unsafe {
        let mut ok: c_int = 0;
        // rho of su(2,3)
        let st = bk_admissible_hermitian(cs("su_pq:2,3").as_ptr(), cs("2,1,0,-1,-2").as_ptr(), &mut ok);
        assert_eq!(st, BkStatus::Ok, "{}", last_error());
        assert_eq!(ok, 1);
        let st = bk_admissible_hermitian(cs("g2_2").as_ptr(), cs("1,2,-3").as_ptr(), &mut ok);
        assert_eq!(st, BkStatus::Config);
        assert_eq!(CStr::from_ptr(bk_version()).to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }
}
