use std::path::PathBuf;
use std::process::{Command, Output};

use ziptree::oracle::canonical_shape;
use ziptree::{Rank, Shape};

fn ziptree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ziptree"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ziptree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_script(name: &str, body: &str) -> PathBuf {
    let p = scratch(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn dumps(out: &str) -> Vec<Shape<i64>> {
    out.lines()
        .filter(|l| *l == "null" || l.starts_with('{'))
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

/// Ten keys with ranks chosen so that rank 3 lands mid-tree.
const FIXTURE: [(i64, u32); 10] = [
    (2, 0),
    (5, 2),
    (8, 1),
    (11, 0),
    (14, 4),
    (17, 0),
    (20, 1),
    (23, 3),
    (26, 0),
    (29, 2),
];

#[test]
fn three_node_trace() {
    let p = write_script("three.txt", "insert 1 0\ninsert 2 1\ninsert 3 0\ndump\n");
    let o = ziptree(&["trace", p.to_str().unwrap()]);
    assert!(o.status.success());
    let d = dumps(&stdout(&o));
    let expected = canonical_shape(&[(1, Rank::integer(0)), (2, Rank::integer(1)), (3, Rank::integer(0))]).unwrap();
    assert_eq!(d, vec![expected.clone()]);
    assert_eq!(expected.root().unwrap().key, 2);
}

#[test]
fn empty_dump() {
    let p = write_script("empty.txt", "dump\n");
    let o = ziptree(&["trace", p.to_str().unwrap()]);
    assert_eq!(stdout(&o), "null\n");
}

#[test]
fn insert_then_delete_at_rank_three_restores_the_fixture() {
    let mut script: String = FIXTURE.iter().map(|(k, r)| format!("insert {k} {r}\n")).collect();
    script.push_str("dump\ninsert 16 3\ndump\ndelete 16\ndump\n");
    let p = write_script("fig.txt", &script);
    for strategy in ["rec", "iter"] {
        let o = ziptree(&["trace", p.to_str().unwrap(), "--strategy", strategy]);
        assert!(o.status.success());
        let d = dumps(&stdout(&o));
        assert_eq!(d.len(), 3);
        let fixture: Vec<_> = FIXTURE.iter().map(|&(k, r)| (k, Rank::integer(r))).collect();
        assert_eq!(d[0], canonical_shape(&fixture).unwrap());
        let mut with_k = fixture.clone();
        with_k.push((16, Rank::integer(3)));
        assert_eq!(d[1], canonical_shape(&with_k).unwrap());
        assert_ne!(d[1].root().unwrap().key, 16);
        assert_eq!(d[2], d[0]);
    }
}

#[test]
fn forced_ranks_ignore_the_seed() {
    let p = write_script(
        "forced.txt",
        "insert 4 1\ninsert 9 0\nsearch 9\ndelete 4\ndelete 4\ndump\n",
    );
    let a = ziptree(&["trace", p.to_str().unwrap(), "--seed", "1"]);
    let b = ziptree(&["trace", p.to_str().unwrap(), "--seed", "999"]);
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    assert!(out.contains("search 9 found"));
    assert!(out.contains("delete 4 not-found"));
}

#[test]
fn parse_errors_name_the_line() {
    let p = write_script("bad.txt", "insert 1\n\nremove 3\n");
    let o = ziptree(&["trace", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn bench_two_nodes_has_exact_depth() {
    let out = scratch("two.csv");
    let o = ziptree(&[
        "bench",
        "depth",
        "--n",
        "2",
        "--trials",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let mut r = csv::Reader::from_path(&out).unwrap();
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][4], "node_depth");
    assert_eq!(&rows[0][5], "0.5");
    assert_eq!(&rows[0][9], "true");
}

#[test]
fn bench_json_mirrors_csv() {
    let csv_out = ziptree(&["bench", "root-rank", "--n", "256", "--trials", "4"]);
    let json_out = ziptree(&["bench", "root-rank", "--n", "256", "--trials", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json_out.stdout).unwrap();
    let rows: Vec<_> = stdout(&csv_out).lines().skip(1).map(String::from).collect();
    assert_eq!(v.as_array().unwrap().len(), rows.len());
    assert_eq!(v[0]["metric"], "root_rank");
    assert_eq!(v[0]["bound"], 11.0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ziptree(&["bench", "nonsense"]).status.code(), Some(2));
    assert_eq!(ziptree(&["bench", "depth", "--n", "1"]).status.code(), Some(2));
    assert_eq!(ziptree(&["bench", "depth", "--p", "1.5"]).status.code(), Some(2));
    assert_eq!(
        ziptree(&["bench", "depth", "--n", "8", "--out", "/nonexistent/dir/x.csv"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(ziptree(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_passes_and_catches_faults() {
    let ok = ziptree(&["verify", "--sizes", "0"]);
    assert!(ok.status.success());
    let ok = ziptree(&["verify", "--sizes", "8,32", "--iterations", "2000", "--seed", "4"]);
    assert!(ok.status.success(), "{}", stdout(&ok));
    let bad = ziptree(&["verify", "--sizes", "32", "--iterations", "200", "--inject-fault"]);
    assert_eq!(bad.status.code(), Some(1));
    let out = stdout(&bad);
    assert!(out.contains("heap order") && out.contains("step="), "{out}");
}
