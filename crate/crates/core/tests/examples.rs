// SPDX-License-Identifier: MIT OR Apache-2.0

//! Worked examples with hand-checked values, run through the public API.

use fpseg::oracle::{oracle_constrained, oracle_penalised, DEFAULT_N_LIMIT};
use fpseg::report::{parse_values, run, SolveRequest};
use fpseg::sim::{simulate, SimSpec};
use fpseg::{
    binseg_solve, default_penalty, fpop_solve, op_solve, pdpa_solve, pelt_solve,
    penalised_constrained_consistency, snip_solve, sns_solve, Consistency, CostModel, GaussianCost,
    Method, TimeSeries, TraceLevel,
};

fn step() -> TimeSeries {
    TimeSeries::new(vec![1.0, 1.0, 1.0, 10.0, 10.0, 10.0]).unwrap()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() < 1e-12
}

#[test]
fn step_series_costs() {
    let m = GaussianCost::unit();
    assert!(close(m.segment_cost(&step(), 0, 6), 60.75));
    let ramp = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
    assert!(close(m.segment_cost(&ramp, 0, 3), 1.0));
    assert!(close(
        GaussianCost::new(2.0).unwrap().pointwise_cost(0.0, 2.0),
        0.5
    ));
    assert!((default_penalty(100, 1.0).unwrap() - 9.2103).abs() < 1e-4);
    assert!((default_penalty(2, 1.0).unwrap() - 1.3863).abs() < 1e-4);
}

#[test]
fn step_series_penalised() {
    let m = GaussianCost::unit();
    let s = step();
    for beta in [1.0, 100.0] {
        let truth = oracle_penalised(&s, &m, beta, DEFAULT_N_LIMIT)
            .unwrap()
            .best_penalised
            .unwrap();
        let expected = if beta == 1.0 {
            (1.0, vec![3])
        } else {
            (60.75, vec![])
        };
        assert!(close(truth.0, expected.0));
        assert_eq!(truth.1, expected.1);
        for seg in [
            op_solve(&s, &m, beta, TraceLevel::Off).unwrap().0,
            pelt_solve(&s, &m, beta, 0.0, TraceLevel::Off).unwrap().0,
            fpop_solve(&s, &m, beta, TraceLevel::Off).unwrap().0,
        ] {
            assert_eq!(seg.changepoints, expected.1);
            assert!(close(seg.penalised_objective.unwrap(), expected.0));
        }
    }
    let greedy = binseg_solve(&s, &m, 5, 1.0, TraceLevel::Off).unwrap().0;
    assert_eq!(greedy.changepoints, vec![3]);
}

#[test]
fn step_series_constrained() {
    let m = GaussianCost::unit();
    let s = step();
    let truth = oracle_constrained(&s, &m, 2, DEFAULT_N_LIMIT)
        .unwrap()
        .best_per_k;
    assert!(close(truth[0].0, 60.75) && close(truth[1].0, 0.0) && close(truth[2].0, 0.0));
    assert_eq!(truth[1].1, vec![3]);
    for res in [
        sns_solve(&s, &m, 2, TraceLevel::Off).unwrap().0,
        snip_solve(&s, &m, 2, 0.0, TraceLevel::Off).unwrap().0,
        pdpa_solve(&s, &m, 2, TraceLevel::Off).unwrap().0,
    ] {
        assert_eq!(res.costs, vec![60.75, 0.0, 0.0]);
        assert_eq!(res.segmentations[1].changepoints, vec![3]);
    }
    let check = penalised_constrained_consistency(&s, &m, 1.0, 3).unwrap();
    assert!(matches!(check, Consistency::Consistent { k: 1, objective } if close(objective, 1.0)));
}

#[test]
fn two_point_oracle() {
    let m = GaussianCost::unit();
    let s = TimeSeries::new(vec![0.0, 10.0]).unwrap();
    let pen = oracle_penalised(&s, &m, 0.1, DEFAULT_N_LIMIT).unwrap();
    assert_eq!(pen.best_penalised, Some((0.1, vec![1])));
    let con = oracle_constrained(&s, &m, 1, DEFAULT_N_LIMIT).unwrap();
    assert_eq!(con.best_per_k, vec![(25.0, vec![]), (0.0, vec![1])]);
}

#[test]
fn detect_report_from_text() {
    let values = parse_values("1\n1\n1\n10\n10\n10\n").unwrap();
    let series = TimeSeries::new(values).unwrap();
    let mut req = SolveRequest::new(Method::Fpop);
    req.beta = Some(1.0);
    let (fpop, _) = run(&series, &req).unwrap();
    assert_eq!(fpop.changepoints, vec![3]);
    assert_eq!(fpop.penalised_objective, Some(1.0));
    req.method = Method::Pelt;
    assert_eq!(
        run(&series, &req).unwrap().0.changepoints,
        fpop.changepoints
    );
}

#[test]
fn simulated_truth() {
    let sim = simulate(&SimSpec::new(100, 4, 1)).unwrap();
    assert_eq!(sim.changepoints, vec![20, 40, 60, 80]);
    assert_eq!(sim.values.len(), 100);
    let quiet = simulate(&SimSpec::new(50, 0, 1)).unwrap();
    assert!(quiet.changepoints.is_empty());
    assert_eq!(
        simulate(&SimSpec::new(100, 4, 9)).unwrap().values,
        simulate(&SimSpec::new(100, 4, 9)).unwrap().values
    );
}
