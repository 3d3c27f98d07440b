use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn robustcolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_robustcolor")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn avoid_bounds_prints_four_decimals() {
    let o = robustcolor(&["avoid-bounds", "--t", "6", "--a", "2", "--b", "2", "--exact"]);
    assert!(o.status.success(), "{}", stderr(&o));
    // log2(C(6,2)/C(4,2)) = log2(15/6)
    assert_eq!(stdout(&o).trim(), "1.3219");
}

#[test]
fn avoid_bounds_builds_a_covering() {
    let o = robustcolor(&["avoid-bounds", "--t", "12", "--a", "3", "--b", "3", "--covering"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("verified true"), "{out}");
}

#[test]
fn validate_reports_the_offending_line() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("dup.txt");
    fs::write(&s, "# two inserts of one edge\n+ 0 1\n+ 0 1\n").unwrap();
    let o = robustcolor(&["validate", "--stream", path(&s)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    fs::write(&s, "i 0 1\ni 1 2\nd 0 1\n").unwrap();
    let o = robustcolor(&["validate", "--stream", path(&s)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("3 tokens"));
}

#[test]
fn bad_flags_exit_two() {
    for args in [
        &["attack", "--n", "1"][..],
        &["attack", "--algorithm", "greedy"],
        &["attack", "--adversary", "file"],
        &["attack", "--algorithm", "cubic", "--delete-prob", "0.3"],
        &["replay", "--stream", "/nonexistent/stream.txt"],
    ] {
        let o = robustcolor(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn replay_of_empty_stream_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("empty.txt");
    fs::write(&s, "# nothing\n").unwrap();
    let o = robustcolor(&["replay", "--stream", path(&s), "--n", "4", "--algorithm", "exact"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "trial,step,op,u,v,queried,proper,colorsUsed,spaceProxy,event");
    assert!(lines.iter().skip(1).all(|l| l.starts_with("0,0,")), "{out}");
}

#[test]
fn replay_triangle_is_proper_and_repeatable() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("tri.txt");
    fs::write(&s, "+ 0 1\n+ 1 2\n+ 0 2\n").unwrap();
    let colors = dir.path().join("tri.col");
    let args = ["replay", "--stream", path(&s), "--algorithm", "exact", "--query-every-token", "--colorings", path(&colors)];
    let a = robustcolor(&args);
    assert!(a.status.success(), "{}", stderr(&a));
    let out = stdout(&a);
    let mut rdr = csv::Reader::from_reader(out.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    let queried: Vec<&csv::StringRecord> = rows.iter().filter(|r| &r[0] == "0" && &r[1] != "0" && &r[5] == "1").collect();
    assert_eq!(queried.len(), 3);
    for r in queried {
        assert_eq!(&r[6], "1");
        assert!(r[7].parse::<usize>().unwrap() <= 3);
    }
    let col = fs::read_to_string(&colors).unwrap();
    assert_eq!(col.lines().count(), 3);

    let b = robustcolor(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn cubic_rejects_deletes_with_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("del.txt");
    fs::write(&s, "+ 0 1\n- 0 1\n").unwrap();
    let o = robustcolor(&["replay", "--stream", path(&s), "--algorithm", "cubic"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "algorithm = \"switching-2\"\nn = 24\nL = 3\ntrials = 2\nseed = 4\n").unwrap();
    let o = robustcolor(&["attack", "--config", path(&cfg), "--trials", "3", "--adversary", "mono"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("attack: trials 3 improper 0"), "{out}");

    fs::write(&cfg, "colour = 1\n").unwrap();
    let o = robustcolor(&["attack", "--config", path(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn attack_writes_transcript_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.csv");
    let o = robustcolor(&[
        "attack", "--algorithm", "switching-2", "--adversary", "flood", "--n", "32", "--L", "4", "--trials", "2", "--query-every-token", "--assert", "--out", path(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let transcript = fs::read_to_string(&out).unwrap();
    assert!(transcript.lines().count() > 2);
    let summary = fs::read_to_string(dir.path().join("run.summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
}
