use std::f64::consts::PI;

use nlfm_core::acf::psd;
use nlfm_core::fit::Model;
use nlfm_core::synth::{
    design_frequency_function, integrate_phase, synthesize_lfm, synthesize_nlfm, time_grid,
    FitMethod, FrequencyModel, Waveform,
};
use nlfm_core::window::{WindowSpec, DEFAULT_GAUSSIAN_K};

const B: f64 = 100e6;
const FS: f64 = 500e6;

fn designs() -> Vec<FrequencyModel> {
    let mut out = Vec::new();
    for t in [2.5e-6, 10e-6] {
        let specs = [
            WindowSpec::gaussian(DEFAULT_GAUSSIAN_K, B, t).unwrap(),
            WindowSpec::taylor(5, 40.0, B, t).unwrap(),
        ];
        for spec in specs {
            for method in [
                FitMethod::Polynomial { degree: 9 },
                FitMethod::SmoothingSpline { lambda: 1e-22 },
                FitMethod::SmoothingSpline { lambda: 0.0 },
            ] {
                out.push(design_frequency_function(&spec, method, 1001).unwrap());
            }
        }
    }
    out
}

fn unwrapped_phase(w: &Waveform) -> Vec<f64> {
    let s = w.samples();
    let mut phase = vec![0.0; s.len()];
    for i in 1..s.len() {
        phase[i] = phase[i - 1] + (s[i] * s[i - 1].conj()).arg();
    }
    phase
}

#[test]
fn envelope_is_exactly_unit() {
    for model in designs() {
        let w = synthesize_nlfm(&model, FS).unwrap();
        assert!(
            w.samples().iter().all(|z| z.norm() == 1.0),
            "{}",
            model.label()
        );
        let energy: f64 = w.samples().iter().map(|z| z.norm_sqr()).sum();
        assert!((energy - w.len() as f64).abs() <= 1e-9 * w.len() as f64);
    }
    let lfm = synthesize_lfm(10e-6, B, FS).unwrap();
    assert!(lfm.samples().iter().all(|z| z.norm() == 1.0));
}

#[test]
fn synthesis_is_deterministic() {
    let a = designs();
    let b = designs();
    for (ma, mb) in a.iter().zip(&b) {
        let wa = synthesize_nlfm(ma, FS).unwrap();
        let wb = synthesize_nlfm(mb, FS).unwrap();
        assert!(wa
            .samples()
            .iter()
            .zip(wb.samples())
            .all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()));
    }
}

#[test]
fn instantaneous_frequency_round_trip() {
    for model in designs() {
        let w = synthesize_nlfm(&model, FS).unwrap();
        let phase = unwrapped_phase(&w);
        let grid = time_grid(w.pulse_length(), FS);
        let n = phase.len();
        let worst = (2..n - 2)
            .map(|i| {
                let recovered = (phase[i + 1] - phase[i - 1]) * FS / (4.0 * PI);
                (recovered - model.eval(grid[i]).unwrap()).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst <= 1e-3 * B, "{}: {worst:e}", model.label());
    }
}

#[test]
fn integrated_phase_differentiates_back() {
    for model in designs() {
        let phase = integrate_phase(&model, FS).unwrap();
        let grid = time_grid(model.spec().pulse_length(), FS);
        assert_eq!(phase[0], 0.0);
        for i in 2..phase.len() - 2 {
            let f = (phase[i + 1] - phase[i - 1]) * FS / (4.0 * PI);
            assert!((f - model.eval(grid[i]).unwrap()).abs() <= 1e-3 * B);
        }
    }
}

#[test]
fn designs_cross_zero_at_center() {
    for model in designs() {
        assert!(
            model.eval(0.0).unwrap().abs() <= 1e-3 * B,
            "{}",
            model.label()
        );
    }
}

#[test]
fn lfm_is_time_reversal_symmetric() {
    // odd frequency law -> even phase about the pulse center -> x(-t) = x(t)
    let w = synthesize_lfm(2.5e-6, B, FS).unwrap();
    let s = w.samples();
    let n = s.len();
    let worst = (0..n)
        .map(|i| (s[n - 1 - i] - s[i]).norm())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-6, "{worst:e}");
}

#[test]
fn nlfm_time_reversal_deviation() {
    for model in designs() {
        let w = synthesize_nlfm(&model, FS).unwrap();
        let s = w.samples();
        let n = s.len();
        let worst = (0..n)
            .map(|i| (s[n - 1 - i] - s[i]).norm())
            .fold(0.0, f64::max);
        println!("{:64} time-reversal deviation {worst:.3e}", model.label());
    }
}

#[test]
fn psd_follows_target_window() {
    let t = 2.5e-6;
    let spec = WindowSpec::gaussian(DEFAULT_GAUSSIAN_K, B, t).unwrap();
    let model =
        design_frequency_function(&spec, FitMethod::SmoothingSpline { lambda: 1e-22 }, 1001)
            .unwrap();
    let w = synthesize_nlfm(&model, FS).unwrap();
    let spectrum = psd(&w, 8192).unwrap();
    let (mut p, mut q) = (Vec::new(), Vec::new());
    for (f, power) in spectrum.freqs.iter().zip(&spectrum.power) {
        if f.abs() <= B / 2.0 {
            p.push(*power);
            q.push(spec.weight(*f).unwrap());
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mp, mq) = (mean(&p), mean(&q));
    let cov: f64 = p.iter().zip(&q).map(|(a, b)| (a - mp) * (b - mq)).sum();
    let vp: f64 = p.iter().map(|a| (a - mp).powi(2)).sum();
    let vq: f64 = q.iter().map(|b| (b - mq).powi(2)).sum();
    let r = cov / (vp * vq).sqrt();
    assert!(r >= 0.95, "pearson r = {r}");
}
