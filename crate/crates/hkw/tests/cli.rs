use std::process::{Command, Output};

fn hkw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hkw"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = hkw(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn trefoil_bound() {
    assert_eq!(
        stdout(&["bound", "--preset", "trefoil+", "--n", "2"]).trim(),
        "j_top=-1, g*>=1"
    );
    assert_eq!(
        stdout(&["bound", "--preset", "trefoil+", "--n", "3", "--fast"]).trim(),
        "j_top=-2, g*>=1"
    );
}

#[test]
fn milnor_values() {
    for (p, q, g) in [("2", "3", 1), ("3", "4", 3), ("3", "5", 4)] {
        assert_eq!(stdout(&["milnor", p, q]).trim(), format!("g*={g}"));
    }
}

#[test]
fn jones_oracle() {
    assert_eq!(stdout(&["oracle-jones", "--preset", "figure8"]).trim(), "q^5 + q^-5");
    assert_eq!(stdout(&["oracle-jones", "--preset", "unknot"]).trim(), "q + q^-1");
}

#[test]
fn structured_homology() {
    let s = stdout(&[
        "homology",
        "--preset",
        "hopf+",
        "--roots",
        "1,-1",
        "--format",
        "structured",
    ]);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    assert_eq!(v["total_dim"], 4);
    assert_eq!(v["components"], 2);
    assert_eq!(v["generators"].as_array().unwrap().len(), 4);
}

#[test]
fn bad_input_exits_2() {
    let dir = std::env::temp_dir().join(format!("hkw-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let pd = dir.join("bad.pd");
    std::fs::write(&pd, "[[1,2,3]]").unwrap();
    let seq = dir.join("r3.txt");
    std::fs::write(&seq, "components 3\nR3 0 1 2\n").unwrap();
    for args in [
        vec!["homology", "--preset", "nope"],
        vec!["homology", "--pd", pd.to_str().unwrap()],
        vec!["homology", "--preset", "unknot", "--roots", "1,1"],
        vec!["moves", seq.to_str().unwrap(), "--psi", "0,0,0", "--n", "2"],
    ] {
        assert_eq!(hkw(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn move_sequence() {
    let dir = std::env::temp_dir().join(format!("hkw-moves-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let seq = dir.join("cup.txt");
    std::fs::write(&seq, "components 1\nhandle0\nhandle1 merge 0 1\n").unwrap();
    let out = stdout(&["moves", seq.to_str().unwrap(), "--psi", "0", "--roots", "1,-1"]);
    assert!(out.contains("-1 * psi(0)"), "{out}");
    assert!(out.trim_end().ends_with("total degree 0"), "{out}");
}
