use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use multisect_ffi::*;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> Option<String> {
    let p = msd_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn parse(text: &str) -> Result<*mut MsdDiagram, (MsdStatus, String)> {
    let mut d = ptr::null_mut();
    let text = c(text);
    match unsafe { msd_diagram_parse(text.as_ptr(), &mut d) } {
        MsdStatus::Ok => Ok(d),
        s => {
            assert!(d.is_null());
            Err((s, last_error().unwrap()))
        }
    }
}

fn read(name: &str) -> *mut MsdDiagram {
    let mut d = ptr::null_mut();
    let path = c(fixture(name).to_str().unwrap());
    assert_eq!(unsafe { msd_diagram_read(path.as_ptr(), &mut d) }, MsdStatus::Ok, "{:?}", last_error());
    d
}

fn run(d: *const MsdDiagram, cmd: &str, twist: Option<&str>, variant: Option<&str>, format: MsdFormat) -> Result<String, MsdStatus> {
    let cmd = c(cmd);
    let twist = twist.map(c);
    let variant = variant.map(c);
    let mut out: *mut c_char = ptr::null_mut();
    let s = unsafe {
        msd_run(
            d,
            cmd.as_ptr(),
            twist.as_ref().map_or(ptr::null(), |s| s.as_ptr()),
            variant.as_ref().map_or(ptr::null(), |s| s.as_ptr()),
            format,
            &mut out,
        )
    };
    if s != MsdStatus::Ok {
        assert!(out.is_null());
        assert!(last_error().is_some());
        return Err(s);
    }
    assert!(last_error().is_none());
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { msd_string_free(out) };
    Ok(text)
}

#[test]
fn computes_through_handles() {
    let ex1 = read("ex1.msd");
    assert_eq!(unsafe { msd_diagram_sections(ex1) }, 3);
    let text = run(ex1, "homology", None, None, MsdFormat::Text).unwrap();
    assert!(text.contains("H0=Z H1=0 H2=Z H3=0"), "{text}");
    let text = run(ex1, "boundary", None, None, MsdFormat::Text).unwrap();
    assert!(text.contains("H1(∂X)=Z/2"), "{text}");
    unsafe { msd_diagram_free(ex1) };

    let ex2 = read("ex2.msd");
    let text = run(ex2, "torsion", None, None, MsdFormat::Text).unwrap();
    assert!(text.contains("(t-1)^-1 up to ±t^k"), "{text}");
    let json: serde_json::Value = serde_json::from_str(&run(ex2, "rel-homology", None, None, MsdFormat::Json).unwrap()).unwrap();
    assert_eq!(json["command"], "rel-homology");
    let plain = run(ex2, "homology", Some("x=1"), Some("absolute"), MsdFormat::Text).unwrap();
    assert!(plain.contains("H1=Z"), "{plain}");
    unsafe { msd_diagram_free(ex2) };
}

#[test]
fn error_codes_match_the_command_line_tool() {
    let cp2 = read("cp2.msd");
    assert_eq!(run(cp2, "no-such-command", None, None, MsdFormat::Text), Err(MsdStatus::Usage));
    assert_eq!(run(cp2, "homology", None, Some("sideways"), MsdFormat::Text), Err(MsdStatus::Usage));
    assert_eq!(run(cp2, "homology", Some("q=t"), None, MsdFormat::Text), Err(MsdStatus::Usage));
    assert_eq!(run(cp2, "monodromy", None, None, MsdFormat::Json), Err(MsdStatus::Computation));
    unsafe { msd_diagram_free(cp2) };

    let (s, msg) = parse("surface {\n  genus = 1\n").unwrap_err();
    assert_eq!(s, MsdStatus::Parse);
    assert!(msg.contains("1:1"), "{msg}");

    let invalid = parse(
        "surface {\n  genus = 2\n  boundary = 1\n  generators = a1 b1 a2 b2\n}\n\
         collection p {\n  u = a1\n  v = a1\n}\ncollection q {\n  u = b1\n  v = b2\n}\ncollection r {\n  u = a2\n  v = b1\n}\n",
    )
    .unwrap();
    assert_eq!(run(invalid, "validate", None, None, MsdFormat::Text), Err(MsdStatus::Invalid));
    unsafe { msd_diagram_free(invalid) };

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { msd_diagram_parse(ptr::null(), &mut out) }, MsdStatus::NullArgument);
    let cmd = c("homology");
    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { msd_run(ptr::null(), cmd.as_ptr(), ptr::null(), ptr::null(), MsdFormat::Text, &mut s) },
        MsdStatus::NullArgument
    );
    let bad = [0xffu8, 0xfe, 0];
    assert_eq!(unsafe { msd_diagram_parse(bad.as_ptr().cast(), &mut out) }, MsdStatus::Utf8);
    unsafe {
        msd_diagram_free(ptr::null_mut());
        msd_string_free(ptr::null_mut());
    }
}

#[test]
fn serialize_round_trips() {
    let ex2 = read("ex2.msd");
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { msd_diagram_serialize(ex2, &mut out) }, MsdStatus::Ok);
    let text = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_owned();
    unsafe { msd_string_free(out) };
    let again = parse(&text).unwrap();
    assert_eq!(
        run(again, "twisted-homology", None, None, MsdFormat::Text),
        run(ex2, "twisted-homology", None, None, MsdFormat::Text)
    );
    unsafe {
        msd_diagram_free(again);
        msd_diagram_free(ex2);
    }
    let v = unsafe { CStr::from_ptr(msd_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_declares_the_exported_functions() {
    let header = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("include/multisect.h")).unwrap();
    for f in [
        "msd_diagram_parse",
        "msd_diagram_read",
        "msd_diagram_free",
        "msd_diagram_serialize",
        "msd_diagram_sections",
        "msd_run",
        "msd_string_free",
        "msd_last_error_message",
        "msd_version",
        "MSD_STATUS_COMPUTATION = 5",
    ] {
        assert!(header.contains(f), "header lacks {f}");
    }
}

/// Compiles a small C program against the generated header and the static
/// library, then runs it on a fixture.
#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        panic!("no C compiler on PATH");
    };
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libmultisect_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("msd_smoke");
    let status = Command::new(cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let run = Command::new(&out).arg(fixture("cp2.msd")).output().unwrap();
    assert_eq!(run.status.code(), Some(0), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).contains("H0=Z H1=0 H2=Z H3=0 H4=Z"));
}

fn which_cc() -> Result<&'static str, ()> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .ok_or(())
}
