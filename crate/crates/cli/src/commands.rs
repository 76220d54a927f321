use serde_json::Value;
use tf_ion::improved::convert_units;
use tf_ion::limit::solve_limit;
use tf_ion::oracle::{critical_slope, shoot, verify_integrals};
use tf_ion::{KSeriesName, LimitConfig, Method, Model, PipelineConfig, Result, ShootConfig, TfError};

use crate::output::{Cell, OutputDocument};

pub const VERSION: &str = env!("TFION_GIT_DESCRIBE");
const GOLDEN: &str = include_str!("../data/golden.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Table {
    /// Taylor coefficients in K
    #[value(name = "1")]
    KCoefficients,
    /// Partial sums in K at the neutral-atom slope
    #[value(name = "2")]
    KPartialSums,
    /// Coefficients of the N-series
    #[value(name = "3")]
    NCoefficients,
    /// Partial sums of the N-series at N = 1
    #[value(name = "4")]
    NPartialSums,
    #[value(name = "t-matrix")]
    TMatrix,
    /// Taylor and improved slope series at N = 1
    #[value(name = "sec5")]
    ImprovedSlope,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    /// eta_m(t)
    #[value(name = "1")]
    Eta,
    /// xi_m(t)
    #[value(name = "2")]
    Xi,
    /// c(N)
    #[value(name = "5")]
    FundamentalC,
    /// X^-1(N), Taylor series
    #[value(name = "6")]
    InvRadiusTaylor,
    /// X^-1(N), improved
    #[value(name = "7")]
    InvRadius,
    /// X(N), improved
    #[value(name = "8")]
    Radius,
    /// b(N), improved
    #[value(name = "9")]
    Ionization,
    /// B(N), improved
    #[value(name = "10")]
    Binding,
    /// K(N), improved
    #[value(name = "11")]
    K,
}

impl Figure {
    fn id(self) -> &'static str {
        match self {
            Figure::Eta => "1",
            Figure::Xi => "2",
            Figure::FundamentalC => "5",
            Figure::InvRadiusTaylor => "6",
            Figure::InvRadius => "7",
            Figure::Radius => "8",
            Figure::Ionization => "9",
            Figure::Binding => "10",
            Figure::K => "11",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub order: usize,
    pub grid: usize,
    pub tol: f64,
    pub z: Option<u32>,
}

impl Settings {
    fn model(&self) -> Result<Model> {
        Model::run(PipelineConfig::new(self.order, self.grid))
    }

    fn document<S: Into<String>>(&self, command: &str, columns: impl IntoIterator<Item = S>) -> OutputDocument {
        let mut doc = OutputDocument::new(columns);
        doc.meta("command", command);
        doc.meta("order", self.order);
        doc.meta("grid", self.grid);
        doc.meta("tol", self.tol);
        if let Some(z) = self.z {
            doc.meta("z", z);
        }
        doc.meta("version", VERSION);
        doc
    }
}

fn labelled<S: Into<String>>(first: S, rest: impl IntoIterator<Item = String>) -> Vec<String> {
    std::iter::once(first.into()).chain(rest).collect()
}

fn k_columns() -> impl Iterator<Item = String> {
    KSeriesName::ALL.into_iter().map(|n| n.label().to_owned())
}

fn running_sums(v: &[f64]) -> Vec<Cell> {
    v.iter()
        .scan(0.0, |acc, x| {
            *acc += x;
            Some(Cell::Num(*acc))
        })
        .collect()
}

pub fn table(which: Table, s: &Settings) -> Result<OutputDocument> {
    let model = s.model()?;
    let ks = &model.k_series;
    let ns = &model.n_series;
    let doc = match which {
        Table::KCoefficients => {
            let mut doc = s.document("tables 1", labelled("f", k_columns()));
            for m in 0..=ks.order() {
                let mut row: Vec<Cell> = vec![format!("f_{m}").into()];
                row.extend(KSeriesName::ALL.iter().map(|n| Cell::Num(ks.get(*n).coeff(m))));
                doc.push(row);
            }
            doc
        }
        Table::KPartialSums => {
            let a = critical_slope(s.tol, &ShootConfig::default())?;
            let k = 2.0 / a.powf(1.5);
            let mut doc = s.document("tables 2", labelled("S", k_columns()));
            doc.meta("k", k);
            for m in 0..=ks.order() {
                let mut row: Vec<Cell> = vec![format!("S_{m}").into()];
                for n in KSeriesName::ALL {
                    row.push(ks.get(n).partial_sum(k, m)?.into());
                }
                doc.push(row);
            }
            doc
        }
        Table::NCoefficients => {
            let cols = ns.columns();
            let mut doc = s.document("tables 3", labelled("f", cols.iter().map(|c| c.0.to_owned())));
            let mut alpha: Vec<Cell> = vec!["alpha".into()];
            alpha.extend(cols.iter().map(|(_, c)| Cell::Text(c.alpha().to_string())));
            doc.push(alpha);
            for n in 0..=ns.order() {
                let mut row: Vec<Cell> = vec![format!("ft_{n}").into()];
                row.extend(cols.iter().map(|(_, c)| Cell::Num(c.coeff(n))));
                doc.push(row);
            }
            doc
        }
        Table::NPartialSums => {
            let cols = ns.columns();
            let mut doc = s.document("tables 4", labelled("S", cols.iter().map(|c| c.0.to_owned())));
            doc.meta("n", 1.0);
            for n in 0..=ns.order() {
                let mut row: Vec<Cell> = vec![format!("S_{n}").into()];
                for (_, c) in &cols {
                    row.push(c.partial_sum(1.0, n)?.into());
                }
                doc.push(row);
            }
            doc
        }
        Table::TMatrix => {
            let t = &model.transform;
            let dim = t.order() + 1;
            let mut doc = s.document("tables t-matrix", labelled("m", (0..dim).map(|n| format!("n{n}"))));
            doc.meta("alpha", t.alpha.to_string());
            for m in 0..dim {
                let mut row = vec![Cell::Num(m as f64)];
                row.extend((0..dim).map(|n| Cell::Num(t.entry(m, n))));
                doc.push(row);
            }
            doc
        }
        Table::ImprovedSlope => {
            let ion = model.ion_series();
            let order = ion.max_order();
            let mut doc = s.document("tables sec5", labelled("row", (0..=order).map(|n| n.to_string())));
            doc.meta("n", 1.0);
            let taylor = ion.series().a.coeffs()[..=order].to_vec();
            let improved = ion.slope_terms(1.0, order)?;
            for (label, terms) in [("(i) terms", &taylor), ("(ii) terms", &improved)] {
                let mut row: Vec<Cell> = vec![label.into()];
                row.extend(terms.iter().map(|&x| Cell::Num(x)));
                doc.push(row);
            }
            for (label, terms) in [("(i) sums", &taylor), ("(ii) sums", &improved)] {
                let mut row: Vec<Cell> = vec![label.into()];
                row.extend(running_sums(terms));
                doc.push(row);
            }
            doc
        }
    };
    Ok(doc)
}

pub fn eval(n: f64, terms: Option<usize>, method: Method, s: &Settings) -> Result<OutputDocument> {
    let ion = s.model()?.ion_series();
    let order = terms.unwrap_or(ion.max_order());
    let st = ion.eval_state(n, order, method)?;
    let mut cols = vec!["N", "X", "b", "B", "a", "K"];
    if s.z.is_some() {
        cols.extend(["Z", "X_bohr", "b_ry", "B_ry"]);
    }
    let mut doc = s.document("eval", cols);
    doc.meta("method", method.to_string());
    doc.meta("terms", order);
    let mut row: Vec<Cell> = [st.n, st.radius, st.ionization, st.binding, st.slope, st.k]
        .into_iter()
        .map(Cell::Num)
        .collect();
    if let Some(z) = s.z {
        let p = convert_units(&st, z)?;
        row.extend([f64::from(z), p.radius, p.ionization, p.binding].map(Cell::Num));
    }
    doc.push(row);
    Ok(doc)
}

pub fn plotdata(figure: Figure, samples: usize, s: &Settings) -> Result<OutputDocument> {
    if samples < 2 {
        return Err(TfError::InvalidParameter("need at least 2 samples".into()));
    }
    let model = s.model()?;
    let name = format!("plotdata {}", figure.id());
    if let Figure::Eta | Figure::Xi = figure {
        let set = &model.expansion;
        let prefix = if figure == Figure::Eta { "eta" } else { "xi" };
        let mut doc = s.document(&name, labelled("t", (1..=set.order()).map(|m| format!("{prefix}_{m}"))));
        for i in 0..samples {
            let t = i as f64 / (samples - 1) as f64;
            let mut row = vec![Cell::Num(t)];
            for m in 1..=set.order() {
                let g = if figure == Figure::Eta { set.eta(m) } else { set.xi(m) };
                row.push(g.eval_at(t)?.into());
            }
            doc.push(row);
        }
        return Ok(doc);
    }

    let ion = model.ion_series();
    let order = ion.max_order();
    let (label, method) = match figure {
        Figure::FundamentalC => ("c", Method::Taylor),
        Figure::InvRadiusTaylor => ("X^-1", Method::Taylor),
        Figure::InvRadius => ("X^-1", Method::Improved),
        Figure::Radius => ("X", Method::Improved),
        Figure::Ionization => ("b", Method::Improved),
        Figure::Binding => ("B", Method::Improved),
        _ => ("K", Method::Improved),
    };
    let mut doc = s.document(&name, labelled("N", (0..=order).map(|m| format!("{label}_{m}"))));
    doc.meta("method", method.to_string());
    for i in 1..=samples {
        let n = i as f64 / samples as f64;
        let mut row = vec![Cell::Num(n)];
        for m in 0..=order {
            let v = if figure == Figure::FundamentalC {
                ion.eval_c(n, m)?
            } else {
                let st = ion.eval_state(n, m, method)?;
                match figure {
                    Figure::InvRadiusTaylor | Figure::InvRadius => st.inv_radius,
                    Figure::Radius => st.radius,
                    Figure::Ionization => st.ionization,
                    Figure::Binding => st.binding,
                    _ => st.k,
                }
            };
            row.push(v.into());
        }
        doc.push(row);
    }
    Ok(doc)
}

fn numbers(v: &Value) -> Vec<f64> {
    v.as_array()
        .map(|a| a.iter().filter_map(Value::as_f64).collect())
        .unwrap_or_default()
}

fn rows(v: &Value) -> Vec<Value> {
    v.as_array().cloned().unwrap_or_default()
}

/// `(order, row)` pairs from an object keyed by order.
fn keyed_rows(v: &Value) -> Vec<(usize, Vec<f64>)> {
    v.as_object()
        .map(|o| {
            o.iter()
                .filter_map(|(k, row)| Some((k.parse().ok()?, numbers(row))))
                .collect()
        })
        .unwrap_or_default()
}

/// Largest absolute difference; NaN counts as infinite.
fn worst(pairs: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    pairs.into_iter().fold(0.0, |acc, (a, b)| {
        let d = (a - b).abs();
        if d.is_nan() {
            f64::INFINITY
        } else {
            acc.max(d)
        }
    })
}

fn scalar(v: &Value) -> f64 {
    v.as_f64().unwrap_or(f64::NAN)
}

/// Compares computed results with the stored reference values. Returns the
/// report and whether every check passed.
pub fn validate(s: &Settings) -> Result<(OutputDocument, bool)> {
    let golden: Value = serde_json::from_str(GOLDEN).expect("embedded reference data is valid JSON");
    let model = s.model()?;
    let ks = &model.k_series;
    let ns = &model.n_series;
    let mut checks: Vec<(&str, f64, f64)> = Vec::new();

    let mut pairs = Vec::new();
    for (m, row) in rows(&golden["table1"]["rows"]).iter().enumerate() {
        for (w, name) in numbers(row).into_iter().zip(KSeriesName::ALL) {
            let got = if m <= ks.order() { ks.get(name).coeff(m) } else { f64::NAN };
            pairs.push((got, w));
        }
    }
    checks.push(("table 1", worst(pairs), 5e-6));

    let k = scalar(&golden["table2"]["k"]);
    let mut pairs = Vec::new();
    for (m, row) in keyed_rows(&golden["table2"]["rows"]) {
        for (w, name) in row.into_iter().zip(KSeriesName::ALL) {
            pairs.push((ks.get(name).partial_sum(k, m).unwrap_or(f64::NAN), w));
        }
    }
    checks.push(("table 2", worst(pairs), 1e-5));

    let tm = &model.transform;
    let mut pairs = Vec::new();
    for (m, row) in rows(&golden["t_matrix"]).iter().enumerate() {
        for (n, w) in numbers(row).into_iter().enumerate() {
            let got = if m.max(n) <= tm.order() { tm.entry(m, n) } else { f64::NAN };
            pairs.push((got, w));
        }
    }
    checks.push(("t-matrix", worst(pairs), 1e-6));

    let cols = ns.columns();
    let mut pairs = Vec::new();
    for (n, row) in rows(&golden["table3"]["rows"]).iter().enumerate() {
        for (w, (_, c)) in numbers(row).into_iter().zip(cols.iter()) {
            let got = if n <= c.order() { c.coeff(n) } else { f64::NAN };
            pairs.push((got, w));
        }
    }
    checks.push(("table 3", worst(pairs), 5e-6));
    checks.push(("recursions", ns.check_recursions().max(), 1e-9));

    let mut pairs = Vec::new();
    for (m, row) in keyed_rows(&golden["table4"]["rows"]) {
        for (w, (_, c)) in row.into_iter().zip(cols.iter()) {
            pairs.push((c.partial_sum(1.0, m).unwrap_or(f64::NAN), w));
        }
    }
    checks.push(("table 4", worst(pairs), 1e-5));

    let ion = model.ion_series();
    let sec5 = &golden["improved_slope_at_one"];
    let want = numbers(&sec5["terms"]);
    let got = ion
        .slope_terms(1.0, want.len().saturating_sub(1).min(ion.max_order()))
        .unwrap_or_default();
    let at = |i: usize| got.get(i).copied().unwrap_or(f64::NAN);
    let mut pairs: Vec<(f64, f64)> = want.iter().enumerate().map(|(i, &w)| (at(i), w)).collect();
    let mut acc = 0.0;
    for (i, w) in numbers(&sec5["partial_sums"]).into_iter().enumerate() {
        acc += at(i);
        pairs.push((acc, w));
    }
    checks.push(("improved slope at N = 1", worst(pairs), 1e-5));

    let limit = solve_limit::<f64>(LimitConfig {
        tol: s.tol,
        ..LimitConfig::default()
    })?;
    checks.push(("limit C", (limit.big_c - scalar(&golden["limit"]["big_c"])).abs(), 5e-4));
    checks.push(("limit c", (limit.c - scalar(&golden["limit"]["c"])).abs(), 2e-5));

    let cfg = ShootConfig::default();
    let a = critical_slope(s.tol, &cfg)?;
    checks.push(("critical slope", (a - scalar(&golden["critical"]["a"])).abs(), 1e-4));
    checks.push(("critical K", (2.0 / a.powf(1.5) - scalar(&golden["critical"]["k"])).abs(), 1e-4));

    let mut moments: f64 = 0.0;
    for slope in [1.6, 2.0, 3.0] {
        moments = moments.max(verify_integrals(&shoot(slope, &cfg)?).max());
    }
    checks.push(("moment identities", moments, 1e-4));

    let mut doc = s.document("validate", ["check", "deviation", "tolerance", "status"]);
    let mut all = true;
    for (name, dev, tol) in checks {
        let pass = dev <= tol;
        all &= pass;
        doc.push(vec![
            name.into(),
            dev.into(),
            tol.into(),
            if pass { "pass" } else { "fail" }.into(),
        ]);
    }
    doc.meta("passed", all);
    Ok((doc, all))
}
