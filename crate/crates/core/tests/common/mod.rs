#![allow(dead_code)]

use std::sync::OnceLock;

use serde_json::Value;
use tf_ion::{Model, PipelineConfig};

pub fn golden() -> &'static Value {
    static GOLDEN: OnceLock<Value> = OnceLock::new();
    GOLDEN.get_or_init(|| {
        serde_json::from_str(include_str!("../../../cli/data/golden.json")).expect("golden data")
    })
}

pub fn vector(v: &Value) -> Vec<f64> {
    v.as_array()
        .expect("array")
        .iter()
        .map(|x| x.as_f64().expect("number"))
        .collect()
}

pub fn matrix(v: &Value) -> Vec<Vec<f64>> {
    v.as_array().expect("array").iter().map(vector).collect()
}

/// Pipeline at the default order and grid, computed once per test binary.
pub fn model() -> &'static Model {
    static MODEL: OnceLock<Model> = OnceLock::new();
    MODEL.get_or_init(|| Model::run(PipelineConfig::default()).expect("pipeline"))
}

/// Collects deviations above a tolerance and formats them for a failure message.
#[derive(Default)]
pub struct Check {
    pub worst: f64,
    pub failures: Vec<String>,
    pub count: usize,
}

impl Check {
    pub fn close(&mut self, what: impl Into<String>, got: f64, want: f64, tol: f64) {
        let dev = (got - want).abs();
        self.count += 1;
        self.worst = self.worst.max(dev);
        if !(dev <= tol) {
            self.failures
                .push(format!("{}: got {got:.9}, want {want:.6}, |dev| = {dev:.2e}", what.into()));
        }
    }

    pub fn assert(self, name: &str) {
        let status = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} {name}: {} checks, worst deviation {:.2e}", self.count, self.worst);
        assert!(
            self.failures.is_empty(),
            "{name}: {} of {} checks failed\n{}",
            self.failures.len(),
            self.count,
            self.failures.join("\n")
        );
    }
}
