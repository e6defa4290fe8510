use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use randspace_core::algebra::{
    self, commutator, diagonal_basis, entropy_sum_infimum, epsilon_entropy, full_matrix_basis,
    gns_construct, is_commuting, is_positive, jordan_product, luders_update, maassen_uffink_bound,
    random_algebra_basis, random_state, spectrum, state_norm_sup, tensor_compose, AlgebraElement,
    CVector, GnsTriple, SpectralDecomposition, Spectrum,
};
use randspace_core::entropy::{eur_report, eur_report_given_position, shannon, EntropyReport};
use randspace_core::gen::{random_model, RandomModelLimits};
use randspace_core::lattice::{
    atoms_and_covering, build_lattice_with_cap, center_and_irreducibility,
    check_probability_measure, classify, gallery, projection_lattice, AtomReport, Classification,
    FiniteOrthoLattice, HasseDescription,
};
use randspace_core::montecarlo::{
    empirical_pmf, empirical_velocity_pmf, sample_particle, tv_distance, SeededStream,
};
use randspace_core::space::is_purely_random;
use randspace_core::{LogBase, ModelError, ParticleModel};

use crate::config::{AlgebraKind, ConfigError, ExpectFlags, ExperimentConfig, Kind, LatticeConfig};
use crate::number::g12;
use crate::report::{Cell, Report};

/// Runs one experiment. Configuration problems are returned as errors;
/// library errors raised while running end up in `Report::failures`.
pub fn run(kind: Kind, cfg: &ExperimentConfig) -> Result<Report, ConfigError> {
    if let Some(k) = cfg.kind {
        if k != kind {
            return Err(ConfigError::Invalid {
                path: "kind".into(),
                message: format!("config is for `{}`, not `{}`", k.name(), kind.name()),
            });
        }
    }
    let start = Instant::now();
    let mut report = match kind {
        Kind::Eur => run_eur(cfg)?,
        Kind::Montecarlo => run_montecarlo(cfg)?,
        Kind::Lattice => run_lattice(cfg)?,
        Kind::Gallery => run_gallery(),
        Kind::Algebra => run_algebra(cfg)?,
        Kind::Gns => run_gns(cfg)?,
        Kind::Infimum => run_infimum(cfg)?,
    };
    report.config = serde_json::to_value(cfg).expect("config serializes");
    report.wall_clock_s = start.elapsed().as_secs_f64();
    Ok(report)
}

fn eur_cells(r: &EntropyReport) -> [Cell; 5] {
    [
        r.n.into(),
        r.h_x.into(),
        r.h_v.into(),
        r.h_s.into(),
        r.slack.into(),
    ]
}

#[derive(Default)]
struct SlackTracker {
    worst: Option<(f64, String)>,
    chain_failure: Option<String>,
    equality_failure: Option<String>,
}

impl SlackTracker {
    fn observe(&mut self, r: &EntropyReport, label: &str, tol: f64, equality: Option<f64>) {
        if self.worst.as_ref().is_none_or(|(s, _)| r.slack < *s) {
            self.worst = Some((r.slack, format!("{label}n={} slack={}", r.n, g12(r.slack))));
        }
        if self.chain_failure.is_none() && !r.chain_holds(tol) {
            self.chain_failure = Some(format!(
                "{label}n={} h_x+h_v={} conditional={} h_s={}",
                r.n,
                g12(r.h_x + r.h_v),
                g12(r.conditional_sum),
                g12(r.h_s)
            ));
        }
        if let Some(eq) = equality {
            if self.equality_failure.is_none() && r.slack.abs() > eq {
                self.equality_failure = Some(format!("{label}n={} slack={}", r.n, g12(r.slack)));
            }
        }
    }

    fn finish(self, report: &mut Report, tol: f64, equality: bool) {
        let (min, witness) = self.worst.unwrap_or((0.0, String::new()));
        report.check(
            "slack_nonnegative",
            min >= -tol,
            Some(format!("min at {witness}")),
        );
        report.check(
            "jensen_chain",
            self.chain_failure.is_none(),
            self.chain_failure,
        );
        if equality {
            report.check(
                "equality",
                self.equality_failure.is_none(),
                self.equality_failure,
            );
        }
    }
}

fn run_eur(cfg: &ExperimentConfig) -> Result<Report, ConfigError> {
    let eur = cfg.eur.clone().unwrap_or_default();
    let base = cfg.base();
    let tol = &cfg.tolerances;
    let equality = eur.expect_equality.then_some(tol.equality);

    if let Some(count) = eur.random_models {
        let seed = cfg.require_seed()?;
        let mut report = Report::new(
            "eur",
            Some(seed),
            &["model_seed", "n", "h_x", "h_v", "h_s", "slack"],
        );
        let limits = RandomModelLimits {
            equivalent: eur.random_equivalent,
            ..RandomModelLimits::default()
        };
        let mut slack = SlackTracker::default();
        let mut impure = None;
        for i in 0..count as u64 {
            let s = seed.wrapping_add(i);
            let result = random_model(s, &limits).and_then(|model| {
                let purity = is_purely_random(model.ensemble(), 1..=model.horizon());
                if !purity.purely_random && impure.is_none() {
                    impure = Some(format!("model_seed={s} {:?}", purity.witness));
                }
                (0..model.horizon())
                    .map(|n| eur_report(&model, n, base))
                    .collect::<Result<Vec<_>, ModelError>>()
            });
            match result {
                Ok(rows) => {
                    for r in rows {
                        slack.observe(&r, &format!("model_seed={s} "), tol.slack, equality);
                        let mut row = vec![Cell::from(s)];
                        row.extend(eur_cells(&r));
                        report.push_row(row);
                    }
                }
                Err(e) => report.fail(format!("model_seed={s}: {e}")),
            }
        }
        slack.finish(&mut report, tol.slack, eur.expect_equality);
        report.check("purely_random", impure.is_none(), impure);
        return Ok(report);
    }

    let model = cfg.section(&cfg.model, "model")?.build()?;
    let steps = eur
        .steps
        .clone()
        .unwrap_or_else(|| (0..model.horizon()).collect());
    let mut report = Report::new("eur", cfg.seed, &["n", "h_x", "h_v", "h_s", "slack"]);
    let mut slack = SlackTracker::default();
    let mut bound_failure = None;
    for &n in &steps {
        let result = eur_row(&model, n, &eur, base).and_then(|r| {
            if bound_failure.is_none() {
                bound_failure = transition_bound_failure(&model, n)?;
            }
            Ok(r)
        });
        match result {
            Ok(r) => {
                slack.observe(&r, "", tol.slack, equality);
                report.push_row(eur_cells(&r).to_vec());
            }
            Err(e) => report.fail(format!("n={n}: {e}")),
        }
    }
    slack.finish(&mut report, tol.slack, eur.expect_equality);
    let purity = is_purely_random(model.ensemble(), 1..=model.horizon());
    report.check(
        "purely_random",
        purity.purely_random,
        purity.witness.map(|w| format!("{w:?}")),
    );
    report.check("transition_bound", bound_failure.is_none(), bound_failure);
    Ok(report)
}

fn eur_row(
    model: &ParticleModel,
    n: usize,
    eur: &crate::config::EurConfig,
    base: LogBase,
) -> Result<EntropyReport, ModelError> {
    if let Some(c) = eur.position {
        return eur_report_given_position(model, n, c, base);
    }
    if eur.condition_on_position {
        let pos = model.position_pmf(n)?.pmf;
        let c = pos.support().next().expect("laws are nonempty");
        return eur_report_given_position(model, n, c, base);
    }
    eur_report(model, n, base)
}

fn transition_bound_failure(model: &ParticleModel, n: usize) -> Result<Option<String>, ModelError> {
    for c in model.position_pmf(n)?.pmf.support() {
        let check = model.transition_bound_check(n, c)?;
        if !check.holds {
            return Ok(Some(format!("n={n} c={c} {:?}", check.worst)));
        }
    }
    Ok(None)
}

fn run_montecarlo(cfg: &ExperimentConfig) -> Result<Report, ConfigError> {
    let seed = cfg.require_seed()?;
    let mc = cfg.section(&cfg.montecarlo, "montecarlo")?;
    let model = cfg.section(&cfg.model, "model")?.build()?;
    if mc.samples == 0 {
        return Err(ConfigError::Invalid {
            path: "montecarlo.samples".into(),
            message: "must be positive".into(),
        });
    }
    if model.horizon() == 0 {
        return Err(ConfigError::Invalid {
            path: "model.horizon".into(),
            message: "velocities need a horizon of at least 1".into(),
        });
    }
    let max_n = mc.max_n.unwrap_or(model.horizon() - 1);
    if max_n >= model.horizon() {
        return Err(ConfigError::Invalid {
            path: "montecarlo.max_n".into(),
            message: format!("must be below the horizon {}", model.horizon()),
        });
    }
    let base = cfg.base();
    let tol = &cfg.tolerances;
    let mut report = Report::new(
        "montecarlo",
        Some(seed),
        &[
            "n",
            "tv_x",
            "tv_v",
            "h_x_emp",
            "h_v_emp",
            "slack_emp",
            "slack_exact",
        ],
    );
    let batch = match sample_particle(
        &model,
        max_n + 1,
        mc.samples,
        SeededStream::new(seed, mc.stream),
    ) {
        Ok(b) => b,
        Err(e) => {
            report.fail(e);
            return Ok(report);
        }
    };
    let mut worst = [(0.0f64, 0usize); 3];
    for n in 0..=max_n {
        let row = (|| -> Result<_, ModelError> {
            let px = model.position_pmf(n)?.pmf;
            let pv = model.velocity_pmf(n)?;
            let ex = empirical_pmf(&batch, n)?;
            let ev = empirical_velocity_pmf(&batch, n)?;
            let exact = eur_report(&model, n, base)?;
            let (hx, hv) = (shannon(&ex, base), shannon(&ev, base));
            Ok((
                tv_distance(&px, &ex),
                tv_distance(&pv, &ev),
                hx,
                hv,
                hx + hv - exact.h_s,
                exact.slack,
            ))
        })();
        match row {
            Ok((tx, tv, hx, hv, se, sx)) => {
                for (slot, v) in worst.iter_mut().zip([tx, tv, (se - sx).abs()]) {
                    if v > slot.0 {
                        *slot = (v, n);
                    }
                }
                report.push_row(vec![
                    n.into(),
                    tx.into(),
                    tv.into(),
                    hx.into(),
                    hv.into(),
                    se.into(),
                    sx.into(),
                ]);
            }
            Err(e) => report.fail(format!("n={n}: {e}")),
        }
    }
    let names = ["tv_position", "tv_velocity", "plugin_slack"];
    let limits = [tol.tv, tol.tv, tol.plugin_slack];
    for ((name, limit), (v, n)) in names.iter().zip(limits).zip(worst) {
        report.check(*name, v <= limit, Some(format!("max {} at n={n}", g12(v))));
    }
    if cfg.output.raw_trajectories {
        report.trajectories = Some(batch.paths().map(<[i64]>::to_vec).collect());
    }
    Ok(report)
}

fn flag_witnesses(class: &Classification, atoms: &AtomReport) -> String {
    let mut parts = Vec::new();
    if let Some([x, y, z]) = &class.distributive_witness {
        parts.push(format!("distributive: x={x} y={y} z={z}"));
    }
    if let Some([x, y, z]) = &class.modular_witness {
        parts.push(format!("modular: x={x} y={y} z={z}"));
    }
    if let Some(x) = &class.orthocomplement_witness {
        parts.push(format!("orthocomplement: x={x}"));
    }
    if let Some([x, y]) = &class.orthomodular_witness {
        parts.push(format!("orthomodular: x={x} y={y}"));
    }
    if let Some([a, x]) = &atoms.covering_witness {
        parts.push(format!("covering: a={a} x={x}"));
    }
    parts.join("; ")
}

fn lattice_from_config(lc: &LatticeConfig) -> Result<FiniteOrthoLattice, ConfigError> {
    let cap = lc.cap.unwrap_or(64);
    let bad = |path: &str, e: &dyn std::fmt::Display| ConfigError::Invalid {
        path: path.into(),
        message: e.to_string(),
    };
    if let Some(name) = &lc.preset {
        return gallery()
            .into_iter()
            .find(|e| &e.name == name)
            .map(|e| e.lattice)
            .ok_or_else(|| bad("lattice.preset", &format!("unknown preset `{name}`")));
    }
    if let Some(p) = &lc.projection {
        let families: Vec<Vec<Vec<num_complex::Complex64>>> = p
            .subspaces
            .iter()
            .map(|vs| {
                vs.iter()
                    .map(|v| {
                        v.iter()
                            .map(|[re, im]| num_complex::Complex64::new(*re, *im))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        return projection_lattice(p.dim, &families, cap)
            .map_err(|e| bad("lattice.projection", &e));
    }
    let elements = lc
        .elements
        .clone()
        .ok_or_else(|| ConfigError::Missing("lattice.elements".into()))?;
    let desc = HasseDescription {
        elements,
        covers: lc.covers.clone(),
        complements: lc.complements.clone(),
    };
    build_lattice_with_cap(&desc, cap).map_err(|e| bad("lattice", &e))
}

fn run_lattice(cfg: &ExperimentConfig) -> Result<Report, ConfigError> {
    let lc = cfg.section(&cfg.lattice, "lattice")?;
    let lat = lattice_from_config(lc)?;
    let mut report = Report::new("lattice", cfg.seed, &["property", "value", "witness"]);
    let class = classify(&lat);
    let atoms = atoms_and_covering(&lat);
    let center = center_and_irreducibility(&lat).ok();
    let text = |o: &Option<String>| o.clone().unwrap_or_default();
    let joined = |w: Option<Vec<String>>| w.map(|v| v.join(" "));
    let rows: Vec<(&str, Cell, Option<String>)> = vec![
        ("size", lat.len().into(), None),
        ("bounded", class.bounded.into(), None),
        (
            "distributive",
            class.distributive.into(),
            joined(class.distributive_witness.clone().map(Vec::from)),
        ),
        (
            "modular",
            class.modular.into(),
            joined(class.modular_witness.clone().map(Vec::from)),
        ),
        (
            "orthocomplemented",
            class.orthocomplemented.into(),
            class.orthocomplement_witness.clone(),
        ),
        (
            "orthomodular",
            class.orthomodular.into(),
            joined(class.orthomodular_witness.clone().map(Vec::from)),
        ),
        ("atomic", atoms.atomic.into(), None),
        ("atomistic", atoms.atomistic.into(), None),
        (
            "covering",
            atoms.covering_property.into(),
            joined(atoms.covering_witness.clone().map(Vec::from)),
        ),
        ("exchange", atoms.exchange_property.into(), None),
        ("atoms", atoms.atoms.join(" ").into(), None),
        (
            "irreducible",
            center
                .as_ref()
                .map_or(Cell::Text("n/a".into()), |c| c.irreducible.into()),
            center
                .as_ref()
                .map(|c| format!("center: {}", c.center.join(" "))),
        ),
    ];
    for (name, value, witness) in rows {
        report.push_row(vec![name.into(), value, text(&witness).into()]);
    }
    report.check("implication_chain", class.implication_chain_holds(), None);
    let irreducible = center.as_ref().map(|c| c.irreducible);
    expect_checks(&mut report, &lc.expect, &class, &atoms, irreducible);
    if let Some(m) = &lc.measure {
        let mut values = vec![f64::NAN; lat.len()];
        for (name, v) in m {
            let i = lat.index(name).map_err(|e| ConfigError::Invalid {
                path: format!("lattice.measure.{name}"),
                message: e.to_string(),
            })?;
            values[i] = *v;
        }
        if let Some(i) = values.iter().position(|v| v.is_nan()) {
            return Err(ConfigError::Missing(format!(
                "lattice.measure.{}",
                lat.name(i)
            )));
        }
        match check_probability_measure(&lat, &values, 1e-12) {
            Ok(mc) => {
                let witness = mc.violation.as_ref().map(|v| format!("{v:?}"));
                report.push_row(vec![
                    "measure_valid".into(),
                    mc.valid.into(),
                    text(&witness).into(),
                ]);
                if let Some(want) = lc.expect.measure_valid {
                    report.check("expect.measure_valid", mc.valid == want, witness);
                }
            }
            Err(e) => report.fail(e),
        }
    }
    Ok(report)
}

fn expect_checks(
    report: &mut Report,
    expect: &ExpectFlags,
    class: &Classification,
    atoms: &AtomReport,
    irreducible: Option<bool>,
) {
    let pairs = [
        (
            "distributive",
            expect.distributive,
            Some(class.distributive),
        ),
        ("modular", expect.modular, Some(class.modular)),
        (
            "orthocomplemented",
            expect.orthocomplemented,
            Some(class.orthocomplemented),
        ),
        (
            "orthomodular",
            expect.orthomodular,
            Some(class.orthomodular),
        ),
        ("atomistic", expect.atomistic, Some(atoms.atomistic)),
        ("covering", expect.covering, Some(atoms.covering_property)),
        ("irreducible", expect.irreducible, irreducible),
    ];
    for (name, want, got) in pairs {
        if let Some(want) = want {
            let ok = got == Some(want);
            let witness = (!ok).then(|| format!("expected {want}, got {got:?}"));
            report.check(format!("expect.{name}"), ok, witness);
        }
    }
}

fn run_gallery() -> Report {
    let mut report = Report::new(
        "gallery",
        None,
        &[
            "lattice",
            "size",
            "distributive",
            "modular",
            "orthocomplemented",
            "orthomodular",
            "atomistic",
            "covering",
            "irreducible",
            "witnesses",
        ],
    );
    for entry in gallery() {
        let class = classify(&entry.lattice);
        let atoms = atoms_and_covering(&entry.lattice);
        let irreducible = center_and_irreducibility(&entry.lattice)
            .map(|c| Cell::Bool(c.irreducible))
            .unwrap_or_else(|_| Cell::Text("n/a".into()));
        report.push_row(vec![
            entry.name.as_str().into(),
            entry.lattice.len().into(),
            class.distributive.into(),
            class.modular.into(),
            class.orthocomplemented.into(),
            class.orthomodular.into(),
            atoms.atomistic.into(),
            atoms.covering_property.into(),
            irreducible,
            flag_witnesses(&class, &atoms).into(),
        ]);
        let mismatches: Vec<String> = entry
            .compare()
            .into_iter()
            .filter(|(_, want, got)| want != got)
            .map(|(flag, want, got)| format!("{flag}: expected {want}, got {got}"))
            .collect();
        report.check(
            format!("gallery.{}", entry.name),
            mismatches.is_empty(),
            (!mismatches.is_empty()).then(|| mismatches.join("; ")),
        );
        report.check(
            format!("implication_chain.{}", entry.name),
            class.implication_chain_holds(),
            None,
        );
    }
    report
}

fn spectrum_text(s: &Spectrum) -> String {
    match s {
        Spectrum::Real(v) => v.iter().map(|x| g12(*x)).collect::<Vec<_>>().join(" "),
        Spectrum::Complex(v) => v
            .iter()
            .map(|z| {
                format!(
                    "{}{:+}i",
                    g12(z.re),
                    g12(z.im).parse::<f64>().unwrap_or(z.im)
                )
            })
            .collect::<Vec<_>>()
            .join(" "),
    }
}

fn vector_text(v: &CVector) -> String {
    v.iter()
        .map(|z| format!("{}:{}", g12(z.re), g12(z.im)))
        .collect::<Vec<_>>()
        .join(" ")
}

fn run_algebra(cfg: &ExperimentConfig) -> Result<Report, ConfigError> {
    let ac = cfg.section(&cfg.algebra, "algebra")?;
    let a = ac.a.build("algebra.a")?;
    let b = ac.b.as_ref().map(|s| s.build("algebra.b")).transpose()?;
    let state = ac
        .state
        .as_ref()
        .map(|s| s.build("algebra.state"))
        .transpose()?;
    let projector = ac
        .projector
        .as_ref()
        .map(|s| s.build("algebra.projector"))
        .transpose()?;
    let seed = cfg.seed.unwrap_or(0);
    let base = cfg.base();
    let mut report = Report::new("algebra", Some(seed), &["quantity", "value"]);
    let row = |r: &mut Report, k: &str, v: Cell| r.push_row(vec![k.into(), v]);

    let norm = a.operator_norm();
    let spec = spectrum(&a);
    row(&mut report, "dim", a.dim().into());
    row(&mut report, "self_adjoint", a.is_self_adjoint().into());
    row(&mut report, "operator_norm", norm.into());
    row(&mut report, "spectrum", spectrum_text(&spec).into());
    row(&mut report, "positive", is_positive(&a).into());
    let cstar = ((&a.adjoint() * &a).operator_norm() - norm * norm).abs();
    row(&mut report, "c_star_residual", cstar.into());
    report.check(
        "c_star_identity",
        cstar <= 1e-10,
        Some(format!("residual {}", g12(cstar))),
    );
    if let Spectrum::Real(values) = &spec {
        let outside = values.iter().find(|l| l.abs() > norm + 1e-10);
        report.check(
            "spectrum_within_norm",
            outside.is_none(),
            outside.map(|l| g12(*l)),
        );
        match state_norm_sup(&a, ac.norm_samples, seed) {
            Ok(sup) => {
                let radius = values.iter().map(|l| l.abs()).fold(0.0, f64::max);
                row(&mut report, "state_norm_sup", sup.into());
                report.check(
                    "state_norm_equals_spectral_radius",
                    (sup - radius).abs() <= 1e-10,
                    Some(format!("sup {} radius {}", g12(sup), g12(radius))),
                );
            }
            Err(e) => report.fail(e),
        }
    }

    if let Some(b) = &b {
        match (commutator(&a, b), jordan_product(&a, b)) {
            (Ok(comm), Ok(jordan)) => {
                let commuting = is_commuting(&a, b).unwrap_or(false);
                let (jn, bound) = (jordan.operator_norm(), norm * b.operator_norm());
                row(&mut report, "commutator_norm", comm.operator_norm().into());
                row(&mut report, "commuting", commuting.into());
                row(&mut report, "jordan_norm", jn.into());
                report.check(
                    "jordan_norm_bound",
                    jn <= bound + 1e-10,
                    Some(format!("{} <= {}", g12(jn), g12(bound))),
                );
            }
            (Err(e), _) | (_, Err(e)) => report.fail(e),
        }
        if ac.tensor {
            match tensor_compose(&a, b) {
                Ok(t) => {
                    let (tn, want) = (t.operator_norm(), norm * b.operator_norm());
                    row(&mut report, "tensor_dim", t.dim().into());
                    row(&mut report, "tensor_norm", tn.into());
                    report.check(
                        "tensor_norm_multiplicative",
                        (tn - want).abs() <= 1e-10,
                        None,
                    );
                }
                Err(e) => report.fail(e),
            }
        }
    }

    if let Some(state) = &state {
        if state.dim() != a.dim() {
            return Err(ConfigError::Invalid {
                path: "algebra.state".into(),
                message: format!(
                    "dimension {} does not match operator dimension {}",
                    state.dim(),
                    a.dim()
                ),
            });
        }
        let e = state.expectation(&a);
        row(&mut report, "expectation_re", e.re.into());
        row(&mut report, "expectation_im", e.im.into());
        row(&mut report, "purity", state.purity().into());
        let positive = state.expectation(&(&a.adjoint() * &a)).re;
        report.check(
            "state_positive_on_a_star_a",
            positive >= -1e-12,
            Some(g12(positive)),
        );
        if let Some(eps) = ac.epsilon {
            for (name, op) in [("a", Some(&a)), ("b", b.as_ref())] {
                let Some(op) = op else { continue };
                match epsilon_entropy(op, state, eps, base) {
                    Ok(h) => row(&mut report, &format!("epsilon_entropy_{name}"), h.into()),
                    Err(e) => report.fail(e),
                }
            }
        }
        if let Some(p) = &projector {
            match luders_update(state, p) {
                Ok(post) => {
                    row(
                        &mut report,
                        "event_probability",
                        state.expectation(p).re.into(),
                    );
                    row(&mut report, "post_purity", post.purity().into());
                    row(
                        &mut report,
                        "post_expectation_re",
                        post.expectation(&a).re.into(),
                    );
                    let valid = algebra::State::new(post.density().clone()).is_ok();
                    report.check("luders_state_valid", valid, None);
                }
                Err(e) => report.fail(e),
            }
        }
    }
    Ok(report)
}

fn gns_row(report: &mut Report, trial: usize, d: usize, t: &GnsTriple) -> [f64; 4] {
    let r = [
        t.expectation_residual(),
        t.multiplicativity_residual(),
        t.star_residual(),
        (t.cyclic_norm() - 1.0).abs(),
    ];
    report.push_row(vec![
        trial.into(),
        d.into(),
        t.basis().len().into(),
        t.dim().into(),
        r[0].into(),
        r[1].into(),
        r[2].into(),
        r[3].into(),
    ]);
    r
}

fn run_gns(cfg: &ExperimentConfig) -> Result<Report, ConfigError> {
    let gc = cfg.section(&cfg.gns, "gns")?;
    if gc.dim == 0 || gc.dim > algebra::MAX_DIM {
        return Err(ConfigError::Invalid {
            path: "gns.dim".into(),
            message: format!("must be in 1..={}", algebra::MAX_DIM),
        });
    }
    let columns = [
        "trial",
        "d",
        "algebra_dim",
        "rep_dim",
        "expectation_residual",
        "multiplicativity_residual",
        "star_residual",
        "cyclic_norm_residual",
    ];
    let mut worst = [0.0f64; 4];
    let mut dims = Vec::new();
    let mut report;
    match gc.algebra {
        AlgebraKind::Random => {
            let seed = cfg.require_seed()?;
            report = Report::new("gns", Some(seed), &columns);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for trial in 0..gc.trials.unwrap_or(200) {
                let d = 1 + trial % gc.dim;
                let basis = random_algebra_basis(d, &mut rng);
                let rank = rng.random_range(1..=d);
                let state = random_state(d, rank, &mut rng);
                match gns_construct(&basis, &state) {
                    Ok(t) => {
                        let r = gns_row(&mut report, trial, d, &t);
                        worst.iter_mut().zip(r).for_each(|(w, v)| *w = w.max(v));
                    }
                    Err(e) => report.fail(format!("trial {trial}: {e}")),
                }
            }
        }
        AlgebraKind::Full | AlgebraKind::Diagonal => {
            report = Report::new("gns", cfg.seed, &columns);
            let state = gc
                .state
                .as_ref()
                .ok_or_else(|| ConfigError::Missing("gns.state".into()))?
                .build("gns.state")?;
            let basis = if gc.algebra == AlgebraKind::Full {
                full_matrix_basis(gc.dim)
            } else {
                diagonal_basis(gc.dim)
            };
            match gns_construct(&basis, &state) {
                Ok(t) => {
                    worst = gns_row(&mut report, 0, gc.dim, &t);
                    dims.push(t.dim());
                }
                Err(e) => report.fail(e),
            }
        }
    }
    let tol = cfg.tolerances.gns;
    let names = [
        "expectation",
        "multiplicative",
        "star_preserving",
        "cyclic_unit_norm",
    ];
    for (name, w) in names.iter().zip(worst) {
        report.check(*name, w <= tol, Some(format!("max residual {}", g12(w))));
    }
    if let Some(want) = gc.expect_dim {
        let ok = !dims.is_empty() && dims.iter().all(|&d| d == want);
        report.check(
            "expect_dim",
            ok,
            Some(format!("expected {want}, got {dims:?}")),
        );
    }
    Ok(report)
}

fn eigenbasis_if_simple(a: &AlgebraElement) -> Option<algebra::CMatrix> {
    let dec = SpectralDecomposition::new(a).ok()?;
    (dec.values.len() == a.dim()).then(|| a.hermitian_eigen().ok().map(|(_, v)| v))?
}

fn run_infimum(cfg: &ExperimentConfig) -> Result<Report, ConfigError> {
    let ic = cfg.section(&cfg.infimum, "infimum")?;
    let a = ic.a.build("infimum.a")?;
    let b = ic.b.build("infimum.b")?;
    let seed = cfg.seed.unwrap_or(0);
    let base = cfg.base();
    let tol = &cfg.tolerances;
    let mut report = Report::new(
        "infimum",
        Some(seed),
        &[
            "infimum",
            "mu_bound",
            "evaluations",
            "starts",
            "best_start",
            "commuting",
            "certificate",
        ],
    );
    let commuting = match is_commuting(&a, &b) {
        Ok(c) => c,
        Err(e) => {
            report.fail(e);
            return Ok(report);
        }
    };
    let mu = match (eigenbasis_if_simple(&a), eigenbasis_if_simple(&b)) {
        (Some(e), Some(f)) => maassen_uffink_bound(&e, &f, base).ok(),
        _ => None,
    };
    match entropy_sum_infimum(&a, &b, ic.epsilon, ic.delta, base, ic.budget, seed) {
        Ok(r) => {
            report.push_row(vec![
                r.value.into(),
                mu.map_or(Cell::Text(String::new()), Cell::Num),
                r.evaluations.into(),
                r.starts.into(),
                r.best_start.into(),
                commuting.into(),
                vector_text(&r.state).into(),
            ]);
            if ic.expect_min.is_some() || ic.expect_max.is_some() {
                let lo = ic.expect_min.unwrap_or(f64::NEG_INFINITY);
                let hi = ic.expect_max.unwrap_or(f64::INFINITY);
                report.check(
                    "expected_range",
                    (lo..=hi).contains(&r.value),
                    Some(format!("{} in [{}, {}]", g12(r.value), g12(lo), g12(hi))),
                );
            }
            let verdict_ok = if commuting {
                r.value <= tol.commuting_max
            } else {
                true
            } && !(r.value > tol.noncommuting_min && commuting);
            report.check(
                "commutativity_verdict",
                verdict_ok,
                Some(format!("infimum {} commuting {commuting}", g12(r.value))),
            );
        }
        Err(e) => report.fail(e),
    }
    Ok(report)
}
