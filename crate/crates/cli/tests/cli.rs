use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hookext::resolution::differential_matrix;
use hookext::Target;
use hookext_cli::cache::ResultCache;
use hookext_cli::dump::MatrixDump;
use hookext_cli::record::compute_record;
use hookext_cli::Family;
use tempfile::TempDir;

struct Env {
    dir: TempDir,
}

impl Env {
    fn new() -> Self {
        Env { dir: tempfile::tempdir().unwrap() }
    }

    fn cache_path(&self) -> PathBuf {
        self.dir.path().join("hookext").join("results.json")
    }

    fn cmd(&self, args: &[&str]) -> Command {
        let mut c = Command::new(env!("CARGO_BIN_EXE_hookext"));
        c.args(args).env("XDG_CACHE_HOME", self.dir.path()).env_remove("HOOKEXT_CONFIG");
        c
    }

    fn run(&self, args: &[&str]) -> Output {
        self.cmd(args).output().unwrap()
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn ext_group(env: &Env, a: u32, b: u32, k: u32, i: u32) -> String {
    let (a, b, k, i) = (a.to_string(), b.to_string(), k.to_string(), i.to_string());
    let o = env.run(&["ext", "--a", &a, "--b", &b, "--k", &k, "--i", &i, "--target", "hook", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    json(&o)["group"].as_str().unwrap().to_string()
}

#[test]
fn ext_examples() {
    let env = Env::new();
    assert_eq!(ext_group(&env, 2, 3, 2, 1), "Z_2");
    assert_eq!(ext_group(&env, 3, 3, 2, 2), "Z_3");
    assert_eq!(ext_group(&env, 2, 3, 1, 2), "0");
    assert_eq!(ext_group(&env, 2, 3, 1, 1), "Z_5");
    let o = env.run(&["ext", "--a", "2", "--b", "3", "--k", "2", "--i", "1"]);
    assert_eq!(stdout(&o).trim(), "Ext^1(Δ(2,1^3), Δ(4,1^1)) = Z_2  (expected Z_2)");
    let o = env.run(&["--ascii", "ext", "--a", "2", "--b", "3", "--k", "2", "--i", "1"]);
    assert!(stdout(&o).is_ascii());
}

#[test]
fn usage_errors_exit_2() {
    let env = Env::new();
    for args in [
        &["ext", "--a", "0", "--b", "3", "--k", "1", "--i", "1"][..],
        &["ext", "--a", "2", "--b", "3", "--k", "4", "--i", "1"],
        &["ext", "--a", "2", "--b", "3", "--k", "1", "--i", "0"],
        &["dump-matrix", "--a", "2", "--b", "3", "--k", "1", "--i", "4"],
        &["verify", "--max-a", "0"],
        &["table", "--max-sum", "1"],
        &["verify", "--theorem", "9.9"],
        &["ext", "--bogus"],
    ] {
        let o = env.run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!stderr(&o).is_empty(), "{args:?}");
        assert!(stdout(&o).is_empty(), "{args:?}");
    }
    assert_eq!(env.run(&["--help"]).status.code(), Some(0));
    assert_eq!(env.run(&["--version"]).status.code(), Some(0));
}

#[test]
fn verify_small_sweep() {
    let env = Env::new();
    let o = env.run(&["verify", "--max-a", "3", "--max-b", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("all ") && last.ends_with(" checks passed"), "{last}");

    let o = env.run(&["verify", "--theorem", "4.1", "--max-a", "3", "--max-b", "4", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let report = json(&o);
    assert_eq!(report["failed"], 0);
    let kinds: Vec<&String> = report["by_kind"].as_object().unwrap().keys().collect();
    assert_eq!(kinds, ["top-degree"]);

    // the descriptive name selects the same checks
    let named = env.run(&["verify", "--theorem", "top-degree", "--max-a", "3", "--max-b", "4", "--format", "json"]);
    assert_eq!(json(&named)["checks"], report["checks"]);
}

#[test]
fn verify_reports_first_mismatch_with_exit_1() {
    let env = Env::new();
    // a cache entry with a consistent checksum but a wrong group is trusted, so verify must catch it
    let mut cache = ResultCache::load(&env.cache_path());
    let mut bad = compute_record(2, 3, 2, 2, Family::Hook).unwrap();
    bad.invariant_factors = vec!["7".into()];
    cache.insert(bad);
    cache.save().unwrap();

    let o = env.run(&["verify", "--theorem", "top-degree", "--a", "2", "--b", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("1 of "), "{text}");
    assert!(text.contains("first counterexample: top-degree at a=2 b=3 k=2 i=2"), "{text}");
    assert!(text.contains("\"invariant_factors\": [\n      \"7\""), "{text}");
    // a bypassed cache recomputes the correct value
    assert_eq!(env.run(&["--no-cache", "verify", "--theorem", "top-degree", "--a", "2", "--b", "3"]).status.code(), Some(0));
}

#[test]
fn table_formats_and_determinism() {
    let env = Env::new();
    let args = ["table", "--max-a", "2", "--max-b", "3", "--format", "csv"];
    let cold = env.run(&args);
    assert_eq!(cold.status.code(), Some(0));
    let csv = stdout(&cold);
    assert_eq!(csv.lines().next().unwrap(), "a,b,k,i,target,group,expected,match");
    assert!(env.cache_path().exists());
    let warm = env.run(&args);
    assert_eq!(warm.stdout, cold.stdout);
    let uncached = env.run(&["--no-cache", "--jobs", "2", "table", "--max-a", "2", "--max-b", "3", "--format", "csv"]);
    assert_eq!(uncached.stdout, cold.stdout);

    let o = env.run(&["table", "--max-a", "2", "--max-b", "3", "--format", "json"]);
    let rows = json(&o);
    let keys: Vec<(u64, u64, u64, u64)> = rows
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["a"].as_u64().unwrap(), r["b"].as_u64().unwrap(), r["k"].as_u64().unwrap(), r["i"].as_u64().unwrap()))
        .collect();
    assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(keys.len(), csv.lines().count() - 1);
    assert!(rows[0].get("wall_ms").is_none());
}

#[test]
fn corrupt_cache_is_ignored_with_a_warning() {
    let env = Env::new();
    std::fs::create_dir_all(env.cache_path().parent().unwrap()).unwrap();
    std::fs::write(env.cache_path(), "{ not json").unwrap();
    let o = env.run(&["ext", "--a", "3", "--b", "3", "--k", "2", "--i", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
    assert!(stdout(&o).contains("= Z_3"));

    // tampering with an entry breaks the checksum
    let text = std::fs::read_to_string(env.cache_path()).unwrap();
    std::fs::write(env.cache_path(), text.replacen("\"3\"", "\"9\"", 1)).unwrap();
    let o = env.run(&["ext", "--a", "3", "--b", "3", "--k", "2", "--i", "2"]);
    assert!(stderr(&o).contains("checksum"), "{}", stderr(&o));
    assert!(stdout(&o).contains("= Z_3"));

    let o = env.run(&["cache", "clear"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!env.cache_path().exists());
    assert!(stdout(&env.run(&["cache", "clear"])).starts_with("no cache"));
}

#[test]
fn dump_matrix_formats() {
    let env = Env::new();
    let base = ["dump-matrix", "--a", "2", "--b", "3", "--k", "1", "--i", "1", "--target", "tensor"];
    let o = env.run(&[&base[..], &["--format", "json"]].concat());
    assert_eq!(o.status.code(), Some(0));
    let dump = MatrixDump::from_json(&stdout(&o)).unwrap();
    let direct = differential_matrix(2, 3, 1, &Target::tensor_shift(2, 3, 1).unwrap()).unwrap();
    assert_eq!(dump.to_sparse().unwrap(), direct.matrix);
    assert_eq!(dump.row_blocks.len(), 3);
    assert_eq!(dump.row_blocks[0].composition, vec![3, 1, 1]);
    assert_eq!(dump.row_labels[0], "1^(3)⊗23");

    // first block starts with a+1 on the diagonal; the last row is (0 ... 0 ±2)
    let m = direct.matrix.to_dense();
    assert_eq!(m.get(0, 0), &3.into());
    let last: Vec<i64> = m.row(m.rows() - 1).iter().map(|x| i64::try_from(x).unwrap()).collect();
    assert!(last[..last.len() - 1].iter().all(|&x| x == 0) && last.last().unwrap().abs() == 2, "{last:?}");

    let o = env.run(&[&base[..], &["--format", "csv"]].concat());
    let csv = stdout(&o);
    assert_eq!(csv.lines().next().unwrap(), "row,col,value");
    assert_eq!(csv.lines().count() - 1, direct.matrix.nnz());

    let text = stdout(&env.run(&base));
    assert!(text.contains("row blocks:"));
    assert!(text.lines().any(|l| l.starts_with("---")));
    let ascii = stdout(&env.run(&[&base[..], &["--ascii"]].concat()));
    assert!(ascii.is_ascii());
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("hookext.toml");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn config_file_precedence() {
    let env = Env::new();
    let cfg = write_config(env.dir.path(), "max_a = 1\nmax_b = 2\nno_cache = true\n");
    let rows = |extra: &[&str]| {
        let o = env.cmd(&[&["table", "--format", "json"][..], extra].concat()).env("HOOKEXT_CONFIG", &cfg).output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        json(&o).as_array().unwrap().len()
    };
    // a = 1, b <= 2: (1,1) has 2 k x 1 i, (1,2) has 3 k x 2 i, two families each
    assert_eq!(rows(&[]), 16);
    assert_eq!(rows(&["--max-b", "1"]), 4);
    assert!(!env.cache_path().exists());

    let bad = write_config(env.dir.path(), "max_a = \"x\"\n");
    let o = env.cmd(&["table"]).env("HOOKEXT_CONFIG", &bad).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}
