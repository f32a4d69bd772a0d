use std::process::Command;

fn permwig() -> Command {
    Command::new(env!("CARGO_BIN_EXE_permwig"))
}

fn run_in(dir: &std::path::Path, args: &[&str]) -> i32 {
    permwig()
        .args(args)
        .arg("--out")
        .arg(dir)
        .status()
        .unwrap()
        .code()
        .unwrap()
}

#[test]
fn identical_inputs_give_identical_records() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("mc.toml");
    std::fs::write(
        &cfg,
        "experiment = \"moment_mc\"\nseed = 9\nn_list = [20, 40]\ntrials = 8\nword = [1, 2, 1, 2]\n\
         family = [\"identity\", \"random\"]\n[entry]\nkind = \"gaussian\"\nbeta = [0.3, 0.2]\n",
    )
    .unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        assert_eq!(run_in(d, &["moment_mc", "--config", cfg.to_str().unwrap()]), 0);
    }
    let ra = std::fs::read(a.join("result.toml")).unwrap();
    assert_eq!(ra, std::fs::read(b.join("result.toml")).unwrap());
    let c = tmp.path().join("c");
    assert_eq!(run_in(&c, &["run", "--config", cfg.to_str().unwrap(), "--seed", "10"]), 0);
    assert_ne!(ra, std::fs::read(c.join("result.toml")).unwrap());
}

#[test]
fn spectrum_writes_csvs() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("s.toml");
    std::fs::write(
        &cfg,
        "experiment = \"spectrum\"\nseed = 4\nn = 300\nbins = 20\nfamily = [\"identity\", \"zeta(2)\"]\n\
         [entry]\nkind = \"gaussian\"\nbeta = [-1.0, 0.0]\n[check]\nks_max = 0.2\n",
    )
    .unwrap();
    let out = tmp.path().join("out");
    assert_eq!(run_in(&out, &["spectrum", "--config", cfg.to_str().unwrap()]), 0);
    let hist = std::fs::read_to_string(out.join("histogram.csv")).unwrap();
    assert_eq!(hist.lines().count(), 21);
    assert!(out.join("density.csv").exists());
    let record: toml::Table = std::fs::read_to_string(out.join("result.toml")).unwrap().parse().unwrap();
    assert_eq!(record["provenance"]["operation"].as_str(), Some("spectrum"));
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(run_in(tmp.path(), &["run", "--recipe", "a1a2"]), 0);
    assert_eq!(run_in(tmp.path(), &["run", "--recipe", "does-not-exist"]), 2);
    assert_eq!(run_in(tmp.path(), &["spectrum", "--recipe", "a1a2"]), 2);
    // a deliberately wrong target
    let cfg = tmp.path().join("bad.toml");
    std::fs::write(
        &cfg,
        "experiment = \"nc_moment\"\nseed = 0\noperator_word = [\"A1\", \"A1\", \"A2\", \"A2\"]\n\
         [check]\ntarget = [1.0, 0.0]\nabs_tol = 1e-6\n",
    )
    .unwrap();
    assert_eq!(run_in(tmp.path(), &["nc_moment", "--config", cfg.to_str().unwrap()]), 1);
}

#[test]
fn recipe_listing_and_printing() {
    let out = permwig().arg("recipes").output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("rho-fourth-moment"));
    let out = permwig().args(["recipes", "--print", "spectrum-zeta"]).output().unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("zeta(2)") && text.contains("seed"));
}
