use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use hhfrac_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn frac_int_of_constant() {
    unsafe {
        let (mut f, mut h) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(hhf_expr_parse(c("1").as_ptr(), &mut f), HhfStatus::Ok);
        assert_eq!(hhf_expr_parse(c("x").as_ptr(), &mut h), HhfStatus::Ok);
        let mut v = 0.0;
        assert_eq!(hhf_frac_int(f, h, 0.0, 1.0, 0.5, 0, 1.0, &mut v), HhfStatus::Ok);
        assert!((v - 2.0 / std::f64::consts::PI.sqrt()).abs() < 1e-12);
        let mut y = 0.0;
        assert_eq!(hhf_expr_eval(h, 0.25, &mut y), HhfStatus::Ok);
        assert_eq!(y, 0.25);
        assert_eq!(hhf_frac_int(f, h, 0.0, 1.0, 0.5, 7, 1.0, &mut v), HhfStatus::Parse);
        hhf_expr_free(f);
        hhf_expr_free(h);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut e = ptr::null_mut();
        assert_eq!(hhf_expr_parse(c("sin(").as_ptr(), &mut e), HhfStatus::Parse);
        assert!(e.is_null());
        let msg = CStr::from_ptr(hhf_last_error()).to_str().unwrap();
        assert!(msg.contains("offset"), "{msg}");

        let mut inst = ptr::null_mut();
        let st = hhf_instance_new(c("x^2").as_ptr(), c("1").as_ptr(), c("-x").as_ptr(), 0.0, 1.0, 0.5, 1.0, &mut inst);
        assert_eq!(st, HhfStatus::Hypothesis);
        assert!(inst.is_null());

        assert_eq!(hhf_expr_parse(ptr::null(), &mut e), HhfStatus::NullPointer);
        assert_eq!(hhf_expr_eval(ptr::null(), 0.0, ptr::null_mut()), HhfStatus::NullPointer);
        hhf_expr_free(ptr::null_mut());
        hhf_instance_free(ptr::null_mut());
        hhf_string_free(ptr::null_mut());
    }
}

#[test]
fn checks_and_json() {
    unsafe {
        let mut inst = ptr::null_mut();
        let st = hhf_instance_new(c("x^2").as_ptr(), c("1").as_ptr(), c("x").as_ptr(), 0.0, 1.0, 1.0, 1.0, &mut inst);
        assert_eq!(st, HhfStatus::Ok);
        let mut r = std::mem::zeroed::<HhfCheckResult>();
        assert_eq!(hhf_check(inst, c("identity-l1").as_ptr(), 0.0, &mut r), HhfStatus::Ok);
        assert_eq!((r.pass, r.status), (1, 0));
        assert!((r.lhs + 1.0 / 12.0).abs() < 1e-12);
        assert!(r.slack.is_nan());

        assert_eq!(hhf_check(inst, c("hh-classical").as_ptr(), 0.0, &mut r), HhfStatus::Ok);
        assert!((r.middle - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(hhf_check(inst, c("quad-oracle").as_ptr(), 0.0, &mut r), HhfStatus::Parse);
        assert_eq!(hhf_check(inst, c("bogus").as_ptr(), 0.0, &mut r), HhfStatus::Parse);

        let mut s = ptr::null_mut();
        assert_eq!(hhf_check_json(inst, c("bound-t1").as_ptr(), 0.0, &mut s), HhfStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(CStr::from_ptr(s).to_str().unwrap()).unwrap();
        assert_eq!(v["check"], "bound-t1");
        assert_eq!(v["pass"], true);
        hhf_string_free(s);
        hhf_instance_free(inst);
    }
}

#[test]
fn version_is_package_version() {
    let v = unsafe { CStr::from_ptr(hhf_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Builds the C smoke program against the generated header and the static library.
#[test]
fn header_compiles_and_links_from_c() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/hhfrac.h");
    assert!(header.exists(), "build script writes the header");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    if Command::new(&cc).arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    // test binaries live in target/<profile>/deps; the static library sits one level up
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libhhfrac_ffi.a");
    let out = tempfile::tempdir().unwrap();
    let bin = out.path().join("smoke");
    let mut cmd = Command::new(&cc);
    cmd.arg("-std=c99").arg("-Wall").arg("-Werror").arg("-I").arg(dir.join("include")).arg(dir.join("tests/smoke.c"));
    if !lib.exists() {
        let status = cmd.arg("-fsyntax-only").status().unwrap();
        assert!(status.success(), "header does not compile");
        eprintln!("static library not built; checked syntax only");
        return;
    }
    let status = cmd.arg(&lib).args(["-lpthread", "-ldl", "-lm", "-o"]).arg(&bin).status().unwrap();
    assert!(status.success(), "C smoke test failed to build");
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "smoke exited with {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
