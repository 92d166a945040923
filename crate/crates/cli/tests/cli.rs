use std::path::Path;
use std::process::Command;

use iro::constraints::{ConstraintSystem, Convention};
use iro::engine::{solve, Budget, Verdict};
use iro::group::{zn, GeneratorSet, GroupId};
use iro::io::{decode_certificate, decode_order, decode_system, decode_window, encode_system, encode_window};
use iro::sampler::UniformSampler;
use iro::sl3::{run_convention, Sl3Instance};
use iro::stats::{pattern_id, pattern_table};
use iro::window::{ball, Window, DEFAULT_SIZE_LIMIT};
use iro_cli::{run, EXIT_ERROR, EXIT_FAIL, EXIT_OK};
use tempfile::TempDir;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn iro(args: &[&str], stdin: &str) -> Out {
    let mut input = stdin.as_bytes();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["iro"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut input, &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn z2_window(points: &[(i64, i64)]) -> String {
    let elems = points.iter().map(|&(x, y)| zn(&[x, y])).collect();
    encode_window(&Window::new(GroupId::Zn(2), elems).unwrap())
}

fn ball_file(dir: &Path, group: &str, radius: usize) -> String {
    let out = iro(&["ball", "--group", group, "--radius", &radius.to_string()], "");
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    write(dir, &format!("ball-{group}-{radius}.json"), &out.stdout)
}

#[test]
fn ball_matches_library() {
    let out = iro(&["ball", "--group", "zn:2", "--radius", "3"], "");
    assert_eq!(out.code, EXIT_OK);
    let w = decode_window(&out.stdout).unwrap();
    let lib = ball(&GeneratorSet::standard(GroupId::Zn(2)), 3, DEFAULT_SIZE_LIMIT).unwrap();
    assert_eq!(w, lib);
    assert_eq!(out.stdout.trim_end(), encode_window(&lib).trim_end());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(iro(&[], "").code, EXIT_ERROR);
    assert_eq!(iro(&["ball", "--group", "free:2", "--radius", "1"], "").code, EXIT_ERROR);
    assert_eq!(iro(&["check-extend", "/no/such/file.json"], "").code, EXIT_ERROR);
    assert_eq!(iro(&["check-extend", "-"], "{not json").code, EXIT_ERROR);
    assert_eq!(iro(&["--jobs", "0", "ball", "--group", "zn:1", "--radius", "1"], "").code, EXIT_ERROR);
    let bad = iro(&["verify-sl3", "--q", "1", "--n", "1,2,2,2,2,2"], "");
    assert_eq!(bad.code, EXIT_ERROR);
    assert!(!bad.stderr.is_empty());
    assert_eq!(iro(&["verify-sl3", "--q", "1", "--n", "2,2,2"], "").code, EXIT_ERROR);
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(iro(&["--help"], "").code, EXIT_OK);
    assert_eq!(iro(&["--version"], "").code, EXIT_OK);
}

#[test]
fn check_extend_and_verify_round_trip() {
    let dir = TempDir::new().unwrap();
    let w = ball_file(dir.path(), "zn:2", 2);
    let sys = iro(&["build-system", "--window", &w, "--positive", "quadrant"], "");
    assert_eq!(sys.code, EXIT_OK, "{}", sys.stderr);
    let sys_path = write(dir.path(), "system.json", &sys.stdout);
    let cert = iro(&["check-extend", &sys_path], "");
    assert_eq!(cert.code, EXIT_OK);
    let system = decode_system(&sys.stdout).unwrap();
    let lib = solve(&system, Budget::default()).unwrap();
    assert_eq!(lib.verdict, Verdict::Sat);
    assert_eq!(decode_certificate(&cert.stdout, system.window()).unwrap(), lib);
    let cert_path = write(dir.path(), "cert.json", &cert.stdout);
    let v = iro(&["verify-certificate", "--system", &sys_path, "--certificate", &cert_path], "");
    assert_eq!(v.code, EXIT_OK);
    assert!(v.stdout.contains("valid"));
}

#[test]
fn tampered_certificate_is_rejected() {
    let dir = TempDir::new().unwrap();
    let out = iro(
        &["verify-sl3", "--q", "1", "--n", "2,2,2,2,2,2", "--convention", "plain-left", "--emit-dir", dir.path().to_str().unwrap()],
        "",
    );
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let sys = dir.path().join("system-plain_left.json");
    let cert = dir.path().join("certificate-plain_left.json");
    let body = std::fs::read_to_string(&cert).unwrap();
    assert!(body.contains("UNSAT"));
    let forged = write(dir.path(), "forged.json", &body.replace("UNSAT", "SAT"));
    let v = iro(
        &["verify-certificate", "--system", sys.to_str().unwrap(), "--certificate", &forged],
        "",
    );
    assert_ne!(v.code, EXIT_OK);
}

#[test]
fn unsat_system_exits_one() {
    let w = Window::interval(0, 1);
    let sys = encode_system(&ConstraintSystem::from_atoms(w, vec![(0, 1), (1, 0)]).unwrap());
    let out = iro(&["check-extend", "-"], &sys);
    assert_eq!(out.code, EXIT_FAIL, "{}", out.stderr);
    assert!(out.stdout.contains("UNSAT"));
}

#[test]
fn verify_sl3_matches_library() {
    let out = iro(&["--format", "json", "verify-sl3", "--q", "1", "--n", "2,3,2,3,2,3", "--convention", "plain-left"], "");
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let inst = Sl3Instance::new(1, [2, 3, 2, 3, 2, 3], Convention::PlainLeft);
    let lib = run_convention(&inst, Budget::default()).unwrap();
    let text = v.to_string();
    assert!(text.contains("unsat_by_propagation") || text.contains("UnsatByPropagation"), "{text}");
    assert!(lib.verified && lib.six_cycle);
}

#[test]
fn estimate_is_reproducible_across_jobs() {
    let dir = TempDir::new().unwrap();
    let w = ball_file(dir.path(), "zn:2", 2);
    let d = write(dir.path(), "d.json", &z2_window(&[(0, 0), (1, 0), (0, 1)]));
    let args = |jobs: &'static str| {
        iro(&["--seed", "17", "--jobs", jobs, "--format", "csv", "estimate", "--window", &w, "--domain", &d, "-n", "3000"], "")
    };
    let (a, b, c) = (args("1"), args("4"), args("1"));
    assert_eq!(a.code, EXIT_OK, "{}", a.stderr);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);

    let s = UniformSampler { window: decode_window(&std::fs::read_to_string(&w).unwrap()).unwrap() };
    let rows = pattern_table(&s, &decode_window(&std::fs::read_to_string(&d).unwrap()).unwrap(), 3000, 17).unwrap();
    for r in rows {
        assert!(a.stdout.contains(&format!("{},{}", r.pattern_id, r.count)), "{}", a.stdout);
    }
}

#[test]
fn seed_can_come_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let w = ball_file(dir.path(), "zn:1", 3);
    let bin = env!("CARGO_BIN_EXE_iro");
    let run = |seed: Option<&str>| {
        let mut c = Command::new(bin);
        c.args(["sample", "--window", &w, "-n", "2", "--compact"]);
        match seed {
            Some(s) => c.env("IRO_SEED", s),
            None => c.env_remove("IRO_SEED"),
        };
        c.output().unwrap()
    };
    let a = run(Some("5"));
    assert!(a.status.success());
    assert_eq!(a.stdout, run(Some("5")).stdout);
    let explicit = Command::new(bin)
        .args(["--seed", "5", "sample", "--window", &w, "-n", "2", "--compact"])
        .env_remove("IRO_SEED")
        .output()
        .unwrap();
    assert_eq!(a.stdout, explicit.stdout);
    assert_ne!(a.stdout, run(None).stdout);
}

#[test]
fn invariance_and_chisq_pass_for_uniform() {
    let dir = TempDir::new().unwrap();
    let w = ball_file(dir.path(), "zn:2", 3);
    let d = write(dir.path(), "d.json", &z2_window(&[(0, 0), (1, 0)]));
    let inv = iro(&["invariance", "--window", &w, "--domain", &d, "--by", "-1,1", "-n", "4000"], "");
    assert_eq!(inv.code, EXIT_OK, "{}{}", inv.stdout, inv.stderr);
    let chi = iro(&["chisq", "--window", &w, "--domain", &d, "-n", "4000"], "");
    assert_eq!(chi.code, EXIT_OK, "{}{}", chi.stdout, chi.stderr);
}

#[test]
fn fixed_sampler_invariance_tracks_the_frozen_pattern() {
    let dir = TempDir::new().unwrap();
    let w = ball_file(dir.path(), "zn:2", 2);
    let d_pts = [(0, 0), (1, 0), (0, 1)];
    let d = write(dir.path(), "d.json", &z2_window(&d_pts));
    for seed in 0..6 {
        let r = iro(&["--seed", &seed.to_string(), "realize", "--action", "shift", "--window", &w], "");
        assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
        let order = write(dir.path(), "order.json", &r.stdout);
        let inv = iro(
            &["invariance", "--kind", "fixed", "--window", &w, "--inner", &order, "--domain", &d, "--by", "1,1", "-n", "50"],
            "",
        );
        let m = decode_order(&r.stdout).unwrap();
        let at = |dx: i64, dy: i64| -> Vec<usize> {
            d_pts.iter().map(|&(x, y)| m.window().index_of(&zn(&[x + dx, y + dy])).unwrap()).collect()
        };
        let same = pattern_id(&m, &at(0, 0)).unwrap() == pattern_id(&m, &at(-1, -1)).unwrap();
        assert_eq!(inv.code, if same { EXIT_OK } else { EXIT_FAIL }, "seed {seed}: {}", inv.stdout);
    }
}

#[test]
fn glue_with_empty_k_returns_second_order() {
    let dir = TempDir::new().unwrap();
    let w = ball_file(dir.path(), "zn:2", 3);
    let s1 = iro(&["--seed", "1", "sample", "--window", &w, "-n", "1"], "");
    let s2 = iro(&["--seed", "2", "sample", "--window", &w, "-n", "1"], "");
    let o1 = write(dir.path(), "o1.json", &s1.stdout);
    let o2 = write(dir.path(), "o2.json", &s2.stdout);
    let k = write(dir.path(), "k.json", &z2_window(&[]));
    let d = write(dir.path(), "d.json", &z2_window(&[(0, 0)]));
    let g = iro(&["glue", "--order1", &o1, "--order2", &o2, "--k", &k, "--d", &d], "");
    assert_eq!(g.code, EXIT_OK, "{}", g.stderr);
    assert_eq!(decode_order(&g.stdout).unwrap(), decode_order(&s2.stdout).unwrap());
}

#[test]
fn convergence_reports_shrinking_error() {
    let out = iro(
        &["--format", "csv", "convergence", "--alpha", "-1,1,1", "--x", "123456789/987654321", "--ns", "100,10000"],
        "",
    );
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let errs: Vec<f64> = out
        .stdout
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(errs.len(), 2);
    assert!(errs[1] < 0.05);
}

#[test]
fn rotation_has_empty_stabilizer_and_lex_does_not() {
    let dir = TempDir::new().unwrap();
    let w = ball_file(dir.path(), "zn:1", 20);
    let r = iro(&["realize", "--alpha", "-1,1,1", "--x", "1/3", "--window", &w], "");
    assert_eq!(r.code, EXIT_OK, "{}", r.stderr);
    let order = write(dir.path(), "rot.json", &r.stdout);
    let s = iro(&["--format", "json", "stabilizer", "--order", &order], "");
    assert_eq!(s.code, EXIT_OK, "{}", s.stderr);
    let v: serde_json::Value = serde_json::from_str(&s.stdout).unwrap();
    assert!(v.to_string().contains("[]"), "{v}");
}

#[test]
fn sweep_output_is_deterministic() {
    let args = ["--seed", "3", "--jobs", "2", "sl3-sweep", "--q", "1", "--span", "2", "--sample", "5", "--convention", "plain-left"];
    let a = iro(&args, "");
    assert_eq!(a.code, EXIT_OK, "{}", a.stderr);
    assert_eq!(a.stdout, iro(&args, "").stdout);
    assert_eq!(a.stdout.lines().count(), 6);
    assert!(a.stdout.lines().skip(1).all(|l| l.contains("unsat")), "{}", a.stdout);
}
