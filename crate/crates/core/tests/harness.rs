use proptest::prelude::*;

use mstsle::harness::{parse_config, run_experiment, summary_json, write_outputs};

fn doc(lattice: &str, bc: &str, selector: &str, extra: &str) -> String {
    format!(
        "lattice = \"{lattice}\"\nbc = \"{bc}\"\nselector = \"{selector}\"\nsize = 8\n\
         samples = 40\nobservables = [\"length\", \"left_passage\", \"displacement\", \"triple_point\"]\n\
         {extra}[fit]\nmin_counts = 1\n[triple]\nresamples = 19\n"
    )
}

#[test]
fn every_lattice_ensemble_and_selector_runs() {
    for lattice in ["square", "honeycomb"] {
        for bc in ["free", "sle_like", "sle_free", "repulsive", "random"] {
            for selector in ["s_to_t", "optimal_crossing"] {
                let config = parse_config(&doc(lattice, bc, selector, "")).unwrap();
                let out = run_experiment(&config)
                    .unwrap_or_else(|e| panic!("{lattice} {bc} {selector}: {e}"));
                assert_eq!(out.records.len(), 40);
                assert_eq!(out.fields.len(), 1);
                let cell = &out.summary.cells[0];
                assert!(cell.mean_length >= 1.0);
                assert!(cell.kappa_fit.is_some() && cell.triple.is_some());
                for r in &out.records {
                    assert!(r.dx.is_some_and(|dx| dx.abs() <= 1.0));
                    let w = r.triple_re.unwrap().hypot(r.triple_im.unwrap());
                    assert!(w <= 1.0 + 1e-9);
                }
            }
        }
    }
}

#[test]
fn outputs_are_written() {
    let config = parse_config(&doc("honeycomb", "free", "s_to_t", "")).unwrap();
    let out = run_experiment(&config).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_outputs(&out, dir.path()).unwrap();
    let summary = std::fs::read_to_string(dir.path().join("summary.json")).unwrap();
    assert_eq!(summary, summary_json(&out.summary));
    let samples = std::fs::read_to_string(dir.path().join("samples.csv")).unwrap();
    assert_eq!(samples.lines().count(), 41);
    let probes = std::fs::read_to_string(dir.path().join("left_passage_0.csv")).unwrap();
    assert!(probes.starts_with("schema_version,cell,face,x,y,angle,left,total"));
    assert_eq!(probes.lines().count(), out.fields[0].probes.len() + 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn summaries_do_not_depend_on_workers(seed in any::<u64>(), workers in 2usize..=8, honeycomb in any::<bool>()) {
        let lattice = if honeycomb { "honeycomb" } else { "square" };
        let run = |w: usize| {
            let extra = format!("seed = {seed}\nworkers = {w}\naspect_ratios = [0.5, 2.0]\n");
            let config = parse_config(&doc(lattice, "free", "s_to_t", &extra)).unwrap();
            let out = run_experiment(&config).unwrap();
            (summary_json(&out.summary), out.records)
        };
        let (one, records_one) = run(1);
        let (many, records_many) = run(workers);
        prop_assert_eq!(one, many);
        prop_assert_eq!(records_one, records_many);
    }
}
