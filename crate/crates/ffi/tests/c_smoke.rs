//! Compiles a C program against the generated header and the static
//! library, then runs it.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "profin.h"

int main(void) {
    PfAlgebra *alg = NULL;
    if (pf_algebra_new(5, &alg) != PF_STATUS_OK) return 10;
    uint64_t disc = 0;
    if (pf_algebra_discriminant(alg, &disc) != PF_STATUS_OK || disc != 5) return 11;
    char *order = NULL;
    if (pf_fingerprint_order(alg, PF_SIDE_GAMMA, 2, 0, &order) != PF_STATUS_OK) return 12;
    if (strcmp(order, "20160") != 0) return 13;
    pf_string_free(order);
    pf_algebra_free(alg);
    if (pf_algebra_new(4, &alg) != PF_STATUS_INVALID_ARGUMENT) return 14;
    if (pf_last_error_message() == NULL) return 15;
    puts("ok");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().unwrap().parent().unwrap();
    let lib = profile_dir.join("libprofin_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());

    let work = std::env::temp_dir().join(format!("profin-ffi-smoke-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("smoke.c");
    let bin = work.join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();

    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");
    std::fs::remove_dir_all(&work).unwrap();
}
