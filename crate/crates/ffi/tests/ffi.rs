use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use gybe_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = gybe_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn jk6_r() -> *mut GybeMatrix {
    let mut cat = ptr::null_mut();
    let mut r = ptr::null_mut();
    unsafe {
        assert_eq!(
            gybe_category_builtin(c("jk6").as_ptr(), &mut cat),
            GybeStatus::Ok
        );
        assert_eq!(
            gybe_assemble_r(cat, c("2").as_ptr(), c("1,3").as_ptr(), &mut r),
            GybeStatus::Ok
        );
        gybe_category_free(cat);
    }
    r
}

#[test]
fn assemble_and_check() {
    let r = jk6_r();
    let (mut rows, mut cols) = (0, 0);
    let mut holds = false;
    unsafe {
        assert_eq!(gybe_matrix_dim(r, &mut rows, &mut cols), GybeStatus::Ok);
        assert_eq!((rows, cols), (8, 8));
        assert_eq!(gybe_check_gybe(r, 2, 3, &mut holds), GybeStatus::Ok);
        assert!(holds);
        assert_eq!(
            gybe_check_far_commutativity(r, 2, 3, &mut holds),
            GybeStatus::Ok
        );
        assert!(holds);
        assert_eq!(
            gybe_check_braid_relations(r, 2, 4, &mut holds),
            GybeStatus::Ok
        );
        assert!(holds);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(
            gybe_matrix_entry_f64(r, 0, 2, &mut re, &mut im),
            GybeStatus::Ok
        );
        assert!(re.abs() < 1e-12 && (im - 3f64.sqrt() / 2.0).abs() < 1e-12);
        gybe_matrix_free(r);
    }
}

#[test]
fn json_round_trip() {
    let r = jk6_r();
    let mut json = ptr::null_mut();
    let mut back = ptr::null_mut();
    let mut again = ptr::null_mut();
    unsafe {
        assert_eq!(gybe_matrix_to_json(r, &mut json), GybeStatus::Ok);
        assert_eq!(gybe_matrix_from_json(json, &mut back), GybeStatus::Ok);
        assert_eq!(gybe_matrix_to_json(back, &mut again), GybeStatus::Ok);
        assert_eq!(CStr::from_ptr(json), CStr::from_ptr(again));
        gybe_string_free(json);
        gybe_string_free(again);
        gybe_matrix_free(back);
        gybe_matrix_free(r);
    }
}

#[test]
fn group_orders() {
    let r = jk6_r();
    let (mut order, mut exceeded) = (0u64, true);
    unsafe {
        assert_eq!(
            gybe_group_order(r, 2, 3, true, 100_000, &mut order, &mut exceeded),
            GybeStatus::Ok
        );
        assert!(!exceeded && order > 0);
        assert_eq!(
            gybe_group_order(r, 2, 3, true, 5, &mut order, &mut exceeded),
            GybeStatus::Ok
        );
        assert!(exceeded);
        assert_eq!(order, 0);
        gybe_matrix_free(r);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut cat = ptr::null_mut();
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(
            gybe_category_builtin(c("nope").as_ptr(), &mut cat),
            GybeStatus::DataError
        );
        assert!(last_error().contains("nope"));
        assert_eq!(
            gybe_category_builtin(ptr::null(), &mut cat),
            GybeStatus::InvalidArgument
        );
        assert_eq!(
            gybe_category_load(c("/nonexistent.json").as_ptr(), &mut cat),
            GybeStatus::Io
        );
        assert_eq!(
            gybe_matrix_from_json(c("{").as_ptr(), &mut m),
            GybeStatus::DataError
        );
        let singular = c(r#"{"cyclotomic_order": 1, "rows": 1, "cols": 1, "entries": [[]]}"#);
        assert_eq!(
            gybe_matrix_from_json(singular.as_ptr(), &mut m),
            GybeStatus::Ok
        );
        let mut holds = false;
        assert_eq!(gybe_check_gybe(m, 1, 1, &mut holds), GybeStatus::Singular);
        let (mut re, mut im) = (0.0, 0.0);
        assert_eq!(
            gybe_matrix_entry_f64(m, 3, 0, &mut re, &mut im),
            GybeStatus::InvalidArgument
        );
        gybe_matrix_free(m);
        // null handles are ignored by the free functions
        gybe_matrix_free(ptr::null_mut());
        gybe_category_free(ptr::null_mut());
        gybe_string_free(ptr::null_mut());
    }
}

#[test]
fn categories_load_from_file_and_text() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ising.json");
    std::fs::write(&path, gybe::fusion::ISING_JSON).unwrap();
    let mut cat = ptr::null_mut();
    let mut rank = 0;
    unsafe {
        assert_eq!(
            gybe_category_load(c(path.to_str().unwrap()).as_ptr(), &mut cat),
            GybeStatus::Ok
        );
        assert_eq!(gybe_category_rank(cat, &mut rank), GybeStatus::Ok);
        assert_eq!(rank, 3);
        gybe_category_free(cat);
        assert_eq!(
            gybe_category_parse(c(gybe::fusion::JK6_JSON).as_ptr(), &mut cat),
            GybeStatus::Ok
        );
        assert_eq!(gybe_category_rank(cat, &mut rank), GybeStatus::Ok);
        assert_eq!(rank, 5);
        gybe_category_free(cat);
    }
}

#[test]
fn version_is_set() {
    let v = unsafe { CStr::from_ptr(gybe_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

/// Compile a C program against the generated header and the static library.
#[test]
fn c_program_links_against_static_library() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libgybe_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("a C compiler named cc");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("order "));
}
