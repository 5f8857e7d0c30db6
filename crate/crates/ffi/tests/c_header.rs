//! Builds a small C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

fn cc() -> Option<String> {
    ["cc", "gcc", "clang"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok()).map(String::from)
}

#[test]
fn header_compiles_and_links() {
    let Some(cc) = cc() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let include = root.join("include");
    let src = root.join("tests/smoke.c");
    let syntax = Command::new(&cc).args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"]).arg(&include).arg(&src).status().unwrap();
    assert!(syntax.success(), "header does not compile");
    // target/<profile>/deps/c_header-… → target/<profile>/libendok_ffi.a
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().and_then(|d| d.parent()).unwrap().join("libendok_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built, link step skipped", lib.display());
        return;
    }
    let bin = out.join("endok_smoke");
    let link = Command::new(&cc).arg("-I").arg(&include).arg(&src).arg(&lib).args(["-lpthread", "-ldl", "-lm", "-o"]).arg(&bin).status().unwrap();
    assert!(link.success(), "link failed");
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
