use biconn::exec::Execution;
use biconn::formulas::{log_count_degseq, DegseqRegime};
use biconn::mc::{estimate_event, DegreeSource, Event, Model, SampleSpec};
use biconn::numeric::{ln_factorial, log_double_factorial};
use biconn::DegreeSequence;

#[test]
fn large_degree_formula_matches_pairing_simulation() {
    let d = DegreeSequence::new(vec![4; 1000]);
    let formula = log_count_degseq(&d, DegseqRegime::C).unwrap().ln();

    let spec = SampleSpec::new(Model::Pairing, DegreeSource::Fixed(d.clone()));
    let est = estimate_event(&spec, Event::TwoConnectedAndSimple, 200_000, 17, Execution::default()).unwrap();
    assert!(est.std_error / est.value < 0.015);
    let scale = log_double_factorial(d.m()).ln() - 1000.0 * ln_factorial(4);
    let simulated = est.value.ln() + scale;

    let gap = (formula - simulated).abs();
    assert!(gap < 1.05f64.ln(), "formula {formula}, simulated {simulated}, P = {}", est.value);
}
