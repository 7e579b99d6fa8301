use ch_ist::asymptotics::AsymptoticEvaluator;
use ch_ist::io::{read_datum_csv, write_datum_csv};
use ch_ist::scattering::{scatter, InitialDatum, ScatterOptions};
use ch_ist::soliton::{q_of_x, SolitonData};
use ch_ist::spectral::{Pole, SpectralData};

#[test]
fn reflectionless_asymptotics_reproduce_the_soliton() {
    let data = SolitonData::new(0.25, 1.0).unwrap();
    let spec = SpectralData::reflectionless(vec![Pole { a: data.a, gamma: data.gamma }]).unwrap();
    let ev = AsymptoticEvaluator::new(&spec);
    let t = 20.0;
    // x ∈ [45, 65] keeps y/t > 2, where the soliton ray is selected.
    for k in 0..41 {
        let x = 45.0 + 0.5 * k as f64;
        let r = ev.evaluate(x, t).unwrap();
        let exact = q_of_x(&data, x, t).unwrap().q;
        assert!((r.q_total - exact).abs() <= 1e-9, "x = {x}: {} vs {exact}", r.q_total);
        assert_eq!(r.correction, 0.0);
    }
}

#[test]
fn evaluator_steps_off_boundary_rays() {
    let spec = SpectralData::reflectionless(vec![Pole { a: 0.25, gamma: 1.0 }]).unwrap();
    let ev = AsymptoticEvaluator::new(&spec);
    for (x, t) in [(100.0, 50.0), (0.0, 10.0), (-2.5, 10.0)] {
        let r = ev.evaluate(x, t).unwrap();
        assert!(r.q_total.is_finite());
    }
}

#[test]
fn scattering_of_a_csv_datum() {
    let data = SolitonData::new(0.3, 2.0).unwrap();
    let h = 1.0 / 32.0;
    let x: Vec<f64> = (0..3200).map(|k| -50.0 + k as f64 * h).collect();
    let q: Vec<f64> = x.iter().map(|&v| q_of_x(&data, v, 0.0).unwrap().q).collect();
    let mut buf = Vec::new();
    write_datum_csv(&mut buf, &x, &q).unwrap();
    let (xr, qr) = read_datum_csv(buf.as_slice()).unwrap();
    assert_eq!((&xr, &qr), (&x, &q));

    let datum = InitialDatum::new(xr, qr, InitialDatum::DEFAULT_TAIL_TOL).unwrap();
    let spec = scatter(&datum, ScatterOptions { n_z: 60, ..Default::default() }).unwrap();
    assert_eq!(spec.poles().len(), 1);
    let p = spec.poles()[0];
    assert!((p.a - 0.3).abs() <= 1e-3, "a = {}", p.a);
    assert!((p.gamma - 2.0).abs() <= 0.1, "gamma = {}", p.gamma);
    assert!(spec.samples().iter().all(|s| s.r.norm() <= 1e-3));
}
