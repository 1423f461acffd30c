//! Named configurations for the standard experiments.

use std::f64::consts::PI;

use serde_json::{json, Value};

pub struct Preset {
    pub name: &'static str,
    pub experiment: &'static str,
    pub about: &'static str,
    build: fn() -> Value,
}

impl Preset {
    /// Config object including the `experiment` tag.
    pub fn config(&self) -> Value {
        let mut v = (self.build)();
        v["experiment"] = json!(self.experiment);
        v
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn range(a: f64, b: f64, step: f64) -> Vec<f64> {
    let n = ((b - a) / step).round() as usize;
    (0..=n).map(|i| a + step * i as f64).collect()
}

fn open_ring() -> Value {
    json!({
        "geometry": { "type": "ring", "radius": 10.0, "cut_angle": PI / 3.0 },
        "gamma": 1.0,
        "resolution": { "count": 1000 },
        "state": 5,
    })
}

fn ring(gamma: f64) -> Value {
    json!({ "radius": 10.0, "gamma": gamma, "resolution": { "count": 1000 } })
}

fn star(arms: usize, state: usize) -> Value {
    let beta = 2.0 * PI / arms as f64;
    json!({
        "geometry": { "type": "star", "angles": vec![beta; arms - 1], "arm_lengths": vec![30.0; arms] },
        "gamma": 1.0,
        "resolution": { "count": 100 },
        "state": state,
    })
}

fn two_arm_beta(l2: f64) -> Value {
    json!({
        "geometry": { "type": "star", "angles": [PI / 2.0], "arm_lengths": [300.0, l2] },
        "parameter": "beta",
        "values": linspace(0.15 * PI, 0.9 * PI, 10),
        "gamma": 0.1,
        "resolution": { "spacing": 1.5 },
        "gaps": { "slope_threshold": 1e-5 },
    })
}

fn resonance(delta: f64) -> Value {
    json!({
        "radius": 10.0,
        "bottleneck": delta,
        // multiples of the spacing, so every leg is subdivided exactly
        "leg_lengths": range(9.9, 29.7, 0.9),
        "gamma": 1.0,
        "resolution": { "spacing": 0.3 },
        "solver": { "kappa_min": 0.1f64.sqrt(), "kappa_max": 0.26f64.sqrt(), "scan_points": 20 },
        "gaps": { "slope_threshold": 2e-4, "energy_window": [-0.17, -0.1] },
    })
}

fn zline(theta: f64) -> Value {
    json!({
        "mid_length": 10.0,
        "bend_angle": theta,
        "arm_lengths": range(5.0, 15.0, 0.5),
        "gamma": 5.0,
        "resolution": { "spacing": 0.1 },
        // the straight chain at this spacing starts near −3.54, well above −γ²/4
        "solver": { "kappa_min": 2.5f64.sqrt(), "kappa_max": 4.5f64.sqrt(), "scan_points": 24 },
        "gaps": { "slope_threshold": 0.025, "energy_window": [-3.54, -2.5] },
    })
}

pub const PRESETS: &[Preset] = &[
    Preset { name: "fig1", experiment: "ring", about: "full ring R=10, γ=0.5, 1000 points", build: || ring(0.5) },
    Preset { name: "fig2", experiment: "ring", about: "full ring R=10, γ=1, 1000 points", build: || ring(1.0) },
    Preset {
        name: "fig3",
        experiment: "ring-convergence",
        about: "ground-state error against N for R=10, γ=0.5 (use --gamma 1 for the second curve)",
        build: || json!({ "radius": 10.0, "gamma": 0.5, "counts": [100, 200, 400, 800], "level": 0 }),
    },
    Preset {
        name: "fig4",
        experiment: "eigenfunction",
        about: "l=3 state of the ring R=10, γ=5, 100 points",
        build: || {
            json!({
                "geometry": { "type": "ring", "radius": 10.0 },
                "gamma": 5.0,
                "resolution": { "count": 100 },
                "state": 5,
                "window": { "x_min": 8.5, "x_max": 11.5, "y_min": -1.5, "y_max": 1.5 },
            })
        },
    },
    Preset {
        name: "fig5",
        experiment: "eigenfunction",
        about: "l=3 state of the ring R=10, γ=5, 100 points, whole plane",
        build: || json!({ "geometry": { "type": "ring", "radius": 10.0 }, "gamma": 5.0, "resolution": { "count": 100 }, "state": 5 }),
    },
    Preset {
        name: "open-ring",
        experiment: "eigenfunction",
        about: "fifth excited state of the ring R=10 with a π/3 gap, γ=1, 1000 points",
        build: open_ring,
    },
    Preset { name: "fig7", experiment: "eigenfunction", about: "same as open-ring", build: open_ring },
    Preset {
        name: "fig8",
        experiment: "star-sweep",
        about: "symmetric two-arm star, arms 300, γ=0.1, 401 points, β sweep",
        build: || two_arm_beta(300.0),
    },
    Preset {
        name: "fig9",
        experiment: "star-sweep",
        about: "two-arm star with arms 300 and 306, γ=0.1, β sweep",
        build: || two_arm_beta(306.0),
    },
    Preset { name: "fig10", experiment: "eigenfunction", about: "ground state of the 6-arm star, γ=1, 601 points", build: || star(6, 0) },
    Preset {
        name: "fig11",
        experiment: "eigenfunction",
        about: "third excited state of the 10-arm star, γ=1, 1001 points",
        build: || star(10, 3),
    },
    Preset { name: "fig13", experiment: "resonance-sweep", about: "near-loop R=10, Δ=1.9, γ=1, leg sweep", build: || resonance(1.9) },
    Preset { name: "fig14", experiment: "resonance-sweep", about: "near-loop R=10, Δ=2.9, γ=1, leg sweep", build: || resonance(2.9) },
    Preset { name: "fig15", experiment: "resonance-sweep", about: "near-loop R=10, Δ=5.2, γ=1, leg sweep", build: || resonance(5.2) },
    Preset {
        name: "fig16",
        experiment: "star-sweep",
        about: "bend β=π/4, γ=1, arm-length sweep",
        build: || {
            json!({
                "geometry": { "type": "star", "angles": [PI / 4.0], "arm_lengths": [10.0, 10.0] },
                "parameter": "arm_length",
                "values": range(9.9, 29.7, 0.9),
                "gamma": 1.0,
                "resolution": { "spacing": 0.3 },
                "solver": { "kappa_min": 0.1f64.sqrt(), "kappa_max": 1.0, "scan_points": 24 },
                "gaps": { "slope_threshold": 1e-3 },
            })
        },
    },
    Preset { name: "fig17", experiment: "zline-sweep", about: "Z-line R=10, θ=0.32π, γ=5, arm sweep", build: || zline(0.32 * PI) },
    Preset { name: "fig18", experiment: "zline-sweep", about: "right-angle stair R=10, θ=π/2, γ=5, arm sweep", build: || zline(PI / 2.0) },
    Preset { name: "zline-straight", experiment: "zline-sweep", about: "straight control θ=π, γ=5, arm sweep", build: || zline(PI) },
    Preset {
        name: "polymer",
        experiment: "polymer",
        about: "periodic polymer with 8 points per period of length 1, α=1",
        build: || json!({ "alpha": 1.0, "n": 8, "l0": 1.0 }),
    },
    Preset {
        name: "bs-cross",
        experiment: "bs-star",
        about: "right-angle two-arm star, γ=1, Nyström oracle",
        build: || json!({ "beta": PI / 2.0, "gamma": 1.0, "arm_length": 30.0, "nodes_per_arm": 300 }),
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}
