//! Compiles and runs a small C program against the generated header and the
//! static library. Skipped when no C compiler is available.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "braidchain.h"

int main(void) {
    BcBraidMatrix *m = NULL;
    if (bc_braid_matrix_new(BC_FAMILY_SL, 2, &m) != BC_STATUS_OK) return 1;
    bool holds = false;
    if (bc_braid_matrix_check(m, &holds) != BC_STATUS_OK || !holds) return 2;
    char *dump = NULL;
    if (bc_braid_matrix_dump(m, false, &dump) != BC_STATUS_OK) return 3;
    if (strncmp(dump, "dim=4\n", 6) != 0) return 4;
    bc_string_free(dump);
    bc_braid_matrix_free(m);

    if (bc_braid_matrix_new(BC_FAMILY_SP, 3, &m) != BC_STATUS_INVALID_GROUP) return 5;
    printf("%s\n", bc_last_error());
    return 0;
}
"#;

fn compiler() -> Option<&'static str> {
    ["cc", "clang", "gcc"].into_iter().find(|c| {
        Command::new(c)
            .arg("--version")
            .output()
            .is_ok_and(|o| o.status.success())
    })
}

fn target_dir() -> PathBuf {
    // tests run from target/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_is_checked_in() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/braidchain.h");
    let text = std::fs::read_to_string(header).unwrap();
    for name in [
        "bc_last_error",
        "bc_string_free",
        "bc_braid_matrix_new",
        "bc_presentation_chain",
        "bc_presentation_poincare",
        "bc_verify",
        "BC_STATUS_NOT_CONFLUENT",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = compiler() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    let lib = target_dir().join("libbraidchain_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = std::env::temp_dir().join(format!("braidchain-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("main.c");
    let exe = dir.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    assert!(
        out.status.success(),
        "C program exited with {:?}",
        out.status
    );
    assert!(String::from_utf8_lossy(&out.stdout).contains("Sp requires even N"));
    std::fs::remove_dir_all(dir).ok();
}
