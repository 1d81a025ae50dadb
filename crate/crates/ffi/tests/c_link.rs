//! Compiles a C program against the generated header and the static library.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include <string.h>
#include "branchkit.h"

int main(void) {
    BkQuatContext *ctx = NULL;
    if (bk_quat_context_new("g2_2", &ctx) != BK_STATUS_OK) return 10;
    BkTable *t = NULL;
    if (bk_quat_branch(ctx, "1,3,-4", 2, &t) != BK_STATUS_DOMAIN) return 11;
    if (bk_last_error() == NULL) return 12;
    if (bk_quat_context_new("nope", &ctx) != BK_STATUS_CONFIG) return 13;
    BkSp1qContext *sp = NULL;
    if (bk_sp1q_context_new(2, &sp) != BK_STATUS_OK) return 14;
    if (bk_sp1q_branch(sp, "3,2,1", 2, &t) != BK_STATUS_OK) return 15;
    size_t n = bk_table_len(t);
    for (size_t i = 0; i < n; i++) {
        const char *mu, *mult;
        if (bk_table_entry(t, i, &mu, &mult) != BK_STATUS_OK) return 16;
        printf("%s\t%s\n", mu, mult);
    }
    char *json = NULL;
    if (bk_table_to_json(t, &json) != BK_STATUS_OK || strstr(json, "entries") == NULL) return 17;
    bk_string_free(json);
    bk_table_free(t);
    bk_sp1q_context_free(sp);
    bk_quat_context_free(ctx);
    return 0;
}
"#;

fn find_staticlib() -> Option<PathBuf> {
    let exe = std::env::current_exe().ok()?;
    let profile = exe.parent()?.parent()?;
    for dir in [profile.to_path_buf(), profile.join("deps")] {
        let direct = dir.join("libbranchkit_ffi.a");
        if direct.exists() {
            return Some(direct);
        }
        if let Ok(rd) = std::fs::read_dir(&dir) {
            for e in rd.flatten() {
                let name = e.file_name().to_string_lossy().to_string();
                if name.starts_with("libbranchkit_ffi") && name.ends_with(".a") {
                    return Some(e.path());
                }
            }
        }
    }
    None
}

#[test]
fn header_is_valid_c() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let header = std::fs::read_to_string(include.join("branchkit.h")).unwrap();
    for sym in ["bk_quat_branch", "bk_sp1q_branch", "bk_last_error", "bk_string_free", "typedef struct BkTable BkTable"]
    {
        assert!(header.contains(sym), "{sym}");
    }
    let out = Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg("-I")
        .arg(&include)
        .arg(include.join("branchkit.h"))
        .output()
        .expect("a C compiler on PATH");
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn c_program_links_and_runs() {
    let lib = find_staticlib().expect("static library next to the test binary");
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = tmp.join("bk_smoke.c");
    let exe = tmp.join("bk_smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let out = Command::new("cc")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert_eq!(run.status.code(), Some(0));
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 3);
    assert!(stdout.lines().last().unwrap().ends_with("\t3"));
}
