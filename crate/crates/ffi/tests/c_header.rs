use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "freelab.h"

int main(void) {
    FlSemicircle *law = NULL;
    if (fl_semicircle_new(0.0, 2.0, &law) != FL_STATUS_OK) return 10;
    double m4 = 0.0;
    fl_semicircle_moment(law, 4, &m4);
    fl_semicircle_free(law);
    if (m4 != 2.0) return 11;

    const char *argv[] = {"moments", "--m", "2"};
    int code = -1;
    char *out = NULL;
    if (fl_run(argv, 3, &code, &out) != FL_STATUS_OK || code != 0) return 12;
    int ok = strstr(out, "\"command\": \"moments\"") != NULL;
    fl_string_free(out);
    if (!ok) return 13;

    const char *bad[] = {"moments", "--radius", "0"};
    if (fl_run(bad, 3, &code, &out) != FL_STATUS_DOMAIN || code != 2) return 14;
    printf("%s\n", fl_last_error());
    return 0;
}
"#;

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok()
}

#[test]
fn header_compiles_and_links() {
    if !have_cc() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = tmp.join("smoke.c");
    std::fs::write(&src, PROGRAM).unwrap();

    // the test binary sits next to the library in target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    let lib = exe.parent().unwrap().join("libfreelab_ffi.a");
    if !lib.exists() {
        let status = Command::new("cc")
            .args(["-fsyntax-only", "-Wall", "-Werror", "-I"])
            .arg(manifest.join("include"))
            .arg(&src)
            .status()
            .unwrap();
        assert!(status.success());
        return;
    }
    let bin = tmp.join("smoke");
    let status = Command::new("cc")
        .args(["-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C smoke program failed to build");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).contains("radius"));
}
