//! Command-line behavior: verbs, formats, and the stable exit codes.

use std::path::PathBuf;

use synchromata::cli::{run, EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK, EXIT_USAGE};
use synchromata::registry::{example_registry, registry_names};
use synchromata::trn::{parse_trn, serialize_trn};

struct Sandbox {
    dir: PathBuf,
}

impl Sandbox {
    fn new(tag: &str) -> Sandbox {
        let dir =
            std::env::temp_dir().join(format!("synchromata-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Sandbox { dir }
    }

    fn path(&self, name: &str) -> String {
        self.dir.join(name).to_str().unwrap().to_string()
    }

    fn write(&self, name: &str, contents: &str) -> String {
        let p = self.path(name);
        std::fs::write(&p, contents).unwrap();
        p
    }

    fn write_example(&self, name: &str) -> String {
        self.write(
            &format!("{name}.trn"),
            &serialize_trn(&example_registry(name).unwrap().transducer),
        )
    }
}

impl Drop for Sandbox {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.dir);
    }
}

fn invoke(args: &[&str]) -> (i32, String, String) {
    let argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(&argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn round_trip_is_bit_exact_on_every_registry_file() {
    let sandbox = Sandbox::new("roundtrip");
    for name in registry_names() {
        let text = serialize_trn(&example_registry(name).unwrap().transducer);
        let input = sandbox.write(&format!("{name}.trn"), &text);
        let output = sandbox.path(&format!("{name}.out.trn"));
        let (code, _, _) = invoke(&["minimize", &input, "-o", &output]);
        assert_eq!(code, EXIT_OK);
        // parse -> serialize -> parse is the identity on the canonical text.
        let reparsed = serialize_trn(&parse_trn(&text).unwrap());
        assert_eq!(reparsed, text, "{name} round trip");
    }
}

#[test]
fn info_reports_levels_and_partition() {
    let sandbox = Sandbox::new("info");
    let file = sandbox.write_example("BPRIME");
    let (code, out, _) = invoke(&["info", &file]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("synchronizing level: 1"));
    assert!(out.contains("inverse synchronizing level: 3"));
    assert!(out.contains("invertible: yes"));
    assert!(out.contains("letter partition"));
}

#[test]
fn order_emits_json_verdicts_and_exit_codes() {
    let sandbox = Sandbox::new("order");
    let b = sandbox.write_example("B_WITNESS");
    let (code, out, _) = invoke(&["order", &b]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"verdict\":\"infinite\""));
    assert!(out.contains("\"circuit\":[\"{q0,q1}\",\"{q0,q1}\"]"));
    assert!(out.contains("\"level\":1"));
    assert!(out.contains("\"word\":\"(1)^inf|1|(02)^inf\""));

    let c = sandbox.write_example("ORD3_C");
    let (code, out, _) = invoke(&["order", &c]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("\"verdict\":\"finite\""));
    assert!(out.contains("\"index\":1"));
    assert!(out.contains("\"period\":3"));

    // Budget starvation is inconclusive, exit code 3.
    let g = sandbox.write_example("G_H3");
    let (code, out, _) = invoke(&["order", &g, "--max-power", "1"]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    assert!(out.contains("\"verdict\":\"unknown\""));
}

#[test]
fn spectrum_prints_the_sorted_tuples() {
    let sandbox = Sandbox::new("spectrum");
    let m = sandbox.write_example("M_NOTCONJ");
    let (code, out, _) = invoke(&["spectrum", &m, "-k", "3"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(
        out.lines().next().unwrap(),
        "{(3,1,(3,1,2)), (3,1,(21,7,1))}"
    );
}

#[test]
fn product_power_minimize_core_dual_pipeline() {
    let sandbox = Sandbox::new("pipeline");
    let c = sandbox.write_example("ORD3_C");
    let id = sandbox.write_example("ID_3");

    let sq = sandbox.path("sq.trn");
    assert_eq!(invoke(&["product", &c, &c, "-o", &sq]).0, EXIT_OK);
    let cube = sandbox.path("cube.trn");
    assert_eq!(invoke(&["product", &sq, &c, "-o", &cube]).0, EXIT_OK);
    let reduced = sandbox.path("reduced.trn");
    assert_eq!(invoke(&["core", &cube, "-o", &reduced]).0, EXIT_OK);
    assert_eq!(invoke(&["minimize", &reduced, "-o", &reduced]).0, EXIT_OK);
    let id_text = std::fs::read_to_string(&id).unwrap();
    let reduced_text = std::fs::read_to_string(&reduced).unwrap();
    let id_t = parse_trn(&id_text).unwrap();
    let red_t = parse_trn(&reduced_text).unwrap();
    assert!(
        synchromata::minimize::equivalent(&id_t, &red_t)
            .unwrap()
            .equivalent
    );

    // power -m 3 gives the same result in one verb.
    let powered = sandbox.path("powered.trn");
    assert_eq!(invoke(&["power", &c, "-m", "3", "-o", &powered]).0, EXIT_OK);
    let pw = parse_trn(&std::fs::read_to_string(&powered).unwrap()).unwrap();
    assert!(
        synchromata::minimize::equivalent(&id_t, &pw)
            .unwrap()
            .equivalent
    );

    let (code, out, _) = invoke(&["dual", &c, "-k", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("alphabet: 3\n"));
}

#[test]
fn splits_badpairs_and_witness_verbs() {
    let sandbox = Sandbox::new("splits");
    let b = sandbox.write_example("B_WITNESS");
    let (code, out, _) = invoke(&["splits", &b, "-r", "1", "--max-len", "4"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("splitting length: 1"));

    let dot = sandbox.path("graph.dot");
    let (code, out, _) = invoke(&["badpairs", &b, "-r", "1", "--minimal", "--dot", &dot]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("circuit: {q0,q1} -> {q0,q1}"));
    let dot_text = std::fs::read_to_string(&dot).unwrap();
    assert!(dot_text.contains("\"{q0,q1}\" -> \"{q0,q1}\" [label=\"0/1\"];"));

    let (code, out, _) = invoke(&["witness", &b, "-r", "1"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("witness: (1)^inf|1|(02)^inf"));
}

#[test]
fn cayley_combine_and_growth_verbs() {
    let sandbox = Sandbox::new("construct");
    let table = sandbox.write("z2.csv", "e,a\ne,a\na,e\n");
    let cayley_out = sandbox.path("cm.trn");
    assert_eq!(
        invoke(&["cayley", "--table", &table, "-o", &cayley_out]).0,
        EXIT_OK
    );
    let cm = parse_trn(&std::fs::read_to_string(&cayley_out).unwrap()).unwrap();
    assert_eq!(cm.state_count(), 2);

    sandbox.write_example("BASE_B");
    sandbox.write_example("A_H1");
    let spec = sandbox.write(
        "merge.spec",
        "part BASE_B.trn block=0..3 sigma=3,0,1,2\npart A_H1.trn block=4..4\n",
    );
    let combined_out = sandbox.path("combined.trn");
    assert_eq!(invoke(&["combine", &spec, "-o", &combined_out]).0, EXIT_OK);
    let combined = parse_trn(&std::fs::read_to_string(&combined_out).unwrap()).unwrap();
    let bprime = example_registry("BPRIME").unwrap().transducer;
    assert!(
        synchromata::minimize::equivalent(&combined, &bprime)
            .unwrap()
            .equivalent
    );

    let g = sandbox.write_example("G_H3");
    let csv_out = sandbox.path("growth.csv");
    let (code, out, _) = invoke(&["growth", &g, "-m", "6", "--csv", &csv_out]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("classification: at_least_exponential"));
    let csv = std::fs::read_to_string(&csv_out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("m,states,sync_level,bisync_level,coredist_raw")
    );
    assert_eq!(lines.next(), Some("1,2,1,1,0"));
}

#[test]
fn example_verb_and_error_codes() {
    let sandbox = Sandbox::new("errors");
    let (code, out, _) = invoke(&["example", "B_WITNESS"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("alphabet: 3\n"));

    let (code, _, err) = invoke(&["example", "nope"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("unknown example name"));

    // Usage errors: unknown verb, unknown flag, missing value.
    assert_eq!(invoke(&["frobnicate"]).0, EXIT_USAGE);
    let b = sandbox.write_example("B_WITNESS");
    assert_eq!(invoke(&["order", &b, "--wat"]).0, EXIT_USAGE);
    assert_eq!(invoke(&["spectrum", &b, "-k"]).0, EXIT_USAGE);
    assert_eq!(invoke(&[]).0, EXIT_USAGE);

    // Invalid input: a broken file.
    let broken = sandbox.write("broken.trn", "alphabet: 3\nstates: a\na: 0|0->a 1|1->a\n");
    assert_eq!(invoke(&["info", &broken]).0, EXIT_INVALID);

    // Non-synchronizing machines cannot take cores.
    let cm = sandbox.write_example("CM_Z2");
    assert_eq!(invoke(&["core", &cm]).0, EXIT_INVALID);

    // The shift is bijective on lines, so its spectrum exists even though
    // its states are not local permutations.
    let shift = sandbox.write_example("SHIFT2");
    assert_eq!(invoke(&["spectrum", &shift, "-k", "2"]).0, EXIT_OK);

    // A constant-output machine has no level permutation and no spectrum.
    let constant = sandbox.write("constant.trn", "alphabet: 2\nstates: z\nz: 0|0->z 1|0->z\n");
    let (code, _, err) = invoke(&["spectrum", &constant, "-k", "2"]);
    assert_eq!(code, EXIT_INVALID);
    assert!(err.contains("not a permutation"));
}

#[test]
fn outputs_are_deterministic() {
    let sandbox = Sandbox::new("determinism");
    let b = sandbox.write_example("B_WITNESS");
    let first = invoke(&["order", &b]);
    let second = invoke(&["order", &b]);
    assert_eq!(first, second);
    let g = sandbox.write_example("G_H3");
    assert_eq!(
        invoke(&["growth", &g, "-m", "5"]),
        invoke(&["growth", &g, "-m", "5"])
    );
}
