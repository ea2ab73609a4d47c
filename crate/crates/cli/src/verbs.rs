use std::cell::RefCell;
use std::collections::BTreeMap;

use birkhoff::cocycle::{
    coboundary_decompose, cocycle_defect, pvec_map, pvec_to_poly, tau_coboundary, u_to_tau, CocycleMap, LinearMapG, PVec,
};
use birkhoff::hirota::{exactness_conditions, hirota_equation, tau_substitution_check, HirotaForm};
use birkhoff::laurent::{closure_indices, constraint_template};
use birkhoff::poisson::{
    alpha_beta_conditions, ansatz_first, ansatz_second, darboux_residuals, darboux_system, equivalence_j_vs_delta,
    ideal_bracket_residue, j_sym, jacobi_defect, linear_ansatz_constraints, pstar_to_p, PhaseSpace, PoissonTensorLinear,
};
use birkhoff::reduction::{verify_h_symmetry, BigCellNormalizer};
use birkhoff::stratum1::{compare_with_printed, darboux_bracket, stratum1_coisotropy};
use birkhoff::tangent::{derive_dkp_flow, linearized_closure, printed_dkp_flow, symmetry_item, tangent_item, DkpRewriter};
use birkhoff::varieties::{
    big_cell_currents, curve_mu_form, curve_mu_form_printed, derive_curve, elliptic_curve, mu_dictionary, printed_currents,
    sigma1_currents, sigma1_normal_form, RewriteSet,
};
use birkhoff::{closure_constraints, parse_poly, rat, Poly, Polynomial, Stratum, StratumBasis, StructureConstants, Symbol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::{Item, Outcome};
use crate::{CliError, Form, RunConfig, Verb};

type Bounds = BTreeMap<String, String>;

/// Resolves bounds against per-verb defaults and records what was used.
struct Ctx<'a> {
    cfg: &'a RunConfig,
    used: RefCell<Bounds>,
}

impl<'a> Ctx<'a> {
    fn put(&self, name: &str, v: impl ToString) {
        self.used.borrow_mut().insert(name.to_string(), v.to_string());
    }

    fn bound(&self, name: &str, v: Option<i32>, default: i32) -> Result<i32, CliError> {
        let x = v.unwrap_or(default);
        if x < 1 {
            return Err(CliError::Config(format!("--{name} must be at least 1, got {x}")));
        }
        self.put(name, x);
        Ok(x)
    }

    fn jmax(&self, d: i32) -> Result<i32, CliError> {
        self.bound("jmax", self.cfg.jmax, d)
    }
    fn kmax(&self, d: i32) -> Result<i32, CliError> {
        self.bound("kmax", self.cfg.kmax, d)
    }
    fn mmax(&self, d: i32) -> Result<i32, CliError> {
        self.bound("mmax", self.cfg.mmax, d)
    }
    fn nmax(&self, d: i32) -> Result<i32, CliError> {
        self.bound("nmax", self.cfg.nmax, d)
    }

    fn stratum(&self) -> Stratum {
        let s = self.cfg.stratum.unwrap_or(Stratum::BigCell);
        self.put("stratum", s.name());
        s
    }

    fn hirota_form(&self) -> HirotaForm {
        let f = self.cfg.form.unwrap_or(Form::Literal);
        self.put("form", if f == Form::Literal { "literal" } else { "closure" });
        match f {
            Form::Literal => HirotaForm::Literal,
            Form::Closure => HirotaForm::Closure,
        }
    }
}

pub(crate) fn dispatch(cfg: &RunConfig) -> Result<(Bounds, Outcome), CliError> {
    let cx = Ctx { cfg, used: RefCell::new(Bounds::new()) };
    let out = match cfg.verb {
        Verb::Closure => closure(&cx),
        Verb::HSymmetry => h_symmetry(&cx),
        Verb::Currents => currents(&cx),
        Verb::Curve => curve(&cx),
        Verb::Tangent => tangent(&cx),
        Verb::Dkp => dkp(&cx),
        Verb::Cocycle => cocycle(&cx),
        Verb::Coboundary => coboundary(&cx),
        Verb::Jacobi => jacobi(&cx),
        Verb::PoissonIdeal => poisson_ideal(&cx),
        Verb::AnsatzConstraints => ansatz_constraints(&cx),
        Verb::Equivalence => equivalence(&cx),
        Verb::DarbouxSystem => darboux(&cx),
        Verb::Hirota => hirota(&cx),
        Verb::TauSubstitution => tau_substitution(&cx),
        Verb::Stratum1Hierarchy => stratum1(&cx),
        Verb::Sigma12 => sigma12(&cx),
    }?;
    Ok((cx.used.into_inner(), out))
}

fn closure(cx: &Ctx) -> Result<Outcome, CliError> {
    let stratum = cx.stratum();
    let (j, k, m) = (cx.jmax(4)?, cx.kmax(4)?, cx.mmax(4)?);
    let order = cx.bound("order", cx.cfg.order, m + j + k + 2)?;
    let basis = StratumBasis::symbolic(stratum, order, j + k);
    let sys = closure_constraints(&basis, j, k, m)?.normalized();
    let mut out = Outcome::default();
    for (a, b, c) in closure_indices(stratum, j, k, m) {
        let got = sys
            .get(&[a, b, c])
            .cloned()
            .ok_or_else(|| CliError::Config(format!("no constraint at ({a},{b},{c}); raise --order")))?;
        let want = constraint_template(stratum, a, b, c).monic_cleared();
        let r = &got - &want;
        out.items.push(Item::both(format!("closure({a},{b},{c})"), vec![a, b, c], got, r));
    }
    out.notes.push("residual = derived - closed form, both monic-cleared".into());
    Ok(out)
}

fn h_symmetry(cx: &Ctx) -> Result<Outcome, CliError> {
    let n = cx.nmax(6)?;
    let mut out = Outcome::default();
    for ((i, k), r) in verify_h_symmetry(n)? {
        out.items.push(Item::check(format!("h-symmetry({i},{k})"), vec![i, k], r));
    }
    Ok(out)
}

fn currents(cx: &Ctx) -> Result<Outcome, CliError> {
    let stratum = cx.stratum();
    let n = cx.nmax(5)?;
    let derived = match stratum {
        Stratum::BigCell => big_cell_currents(n)?,
        Stratum::Sigma1 => sigma1_currents(n)?,
    };
    let printed = printed_currents(stratum);
    let mut out = Outcome::default();
    for (i, p) in &derived {
        let label = format!("p{i}");
        match printed.get(i) {
            Some(want) => {
                if want.to_string() != p.to_string() {
                    out.notes.push(format!("p{i}: canonical text differs from the printed form"));
                }
                out.items.push(Item::both(label, vec![*i], p.clone(), want - p));
            }
            None => out.items.push(Item::value(label, vec![*i], p.clone())),
        }
    }
    Ok(out)
}

fn curve(cx: &Ctx) -> Result<Outcome, CliError> {
    let order = cx.bound("order", cx.cfg.order, 10)?;
    let printed = elliptic_curve().polynomial;
    let derived = derive_curve(order)?;
    let nf = sigma1_normal_form();
    let diff = &printed - &derived.curve;
    let mut out = Outcome::default();
    out.items.push(Item::value("printed", vec![], printed.clone()));
    out.items.push(Item::value("derived", vec![], derived.curve.clone()));
    out.items.push(Item::value("literal-difference", vec![], diff.clone()));
    out.items.push(Item::check("normal-form-difference", vec![], nf.reduce(&diff)));
    // Below this degree the truncated basis no longer gives exact coefficients.
    let exact_from = 7 - order;
    for (d, r) in &derived.residuals {
        if *d >= exact_from {
            out.items.push(Item::both(format!("residual(deg {d})"), vec![*d], r.clone(), nf.reduce(r)));
        }
    }
    let dict = mu_dictionary(&curve_mu_form(), &printed);
    for (a, v) in &dict.entries {
        out.items.push(Item::value(format!("mu{a}"), vec![*a as i32], v.clone()));
    }
    let as_printed = mu_dictionary(&curve_mu_form_printed(), &printed);
    for (a, x, y) in &as_printed.conflicts {
        out.notes.push(format!("printed mu-form reads mu{a} twice: {x} and {y}"));
    }
    if !diff.is_zero() {
        out.notes.push("printed and derived curves differ literally but agree modulo the closure relations".into());
    }
    Ok(out)
}

fn tangent(cx: &Ctx) -> Result<Outcome, CliError> {
    let (j, k, m) = (cx.jmax(3)?, cx.kmax(3)?, cx.mmax(3)?);
    let n = cx.nmax(4)?;
    let nf = BigCellNormalizer::new((j + k + m).max(2 * n) + 2);
    let mut out = Outcome::default();
    for a in 1..=j {
        for b in 1..=k {
            for c in 1..=m {
                let t = tangent_item(a, b, c);
                let r = &t - &linearized_closure(a, b, c);
                out.items.push(Item::both(format!("tangent({a},{b},{c})"), vec![a, b, c], t.clone(), r));
                out.items.push(Item::check(format!("tangent-normal-form({a},{b},{c})"), vec![a, b, c], nf.reduce(&t)?));
            }
        }
    }
    for i in 1..=n {
        for l in (i + 1)..=n {
            let s = symmetry_item(i, l);
            let r = nf.reduce(&s)?;
            out.items.push(Item::both(format!("symmetry({i},{l})"), vec![i, l], s, r));
        }
    }
    Ok(out)
}

fn dkp(cx: &Ctx) -> Result<Outcome, CliError> {
    let level = cx.cfg.level.unwrap_or(1);
    cx.put("level", level);
    let derived = derive_dkp_flow(level)?;
    let printed = printed_dkp_flow(level)?;
    let mut out = Outcome::default();
    for (e, (d, p)) in derived.iter().zip(&printed).enumerate() {
        let combo = d.combination.iter().map(|(l, c)| format!("{c} * {l}")).collect::<Vec<_>>().join(" + ");
        let trace = vec![format!("combination: {combo}"), format!("delta form: {}", d.delta_form)];
        out.items.push(Item::both(format!("flow {} [{combo}]", e + 1), vec![e as i32 + 1], d.equation.clone(), p - &d.equation).with_trace(trace));
    }
    out.notes.push("residual = printed - derived".into());
    Ok(out)
}

fn random_g(seed: u64, imax: i32) -> LinearMapG {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = BTreeMap::new();
    values.insert(0, PVec::new());
    for i in 1..=imax {
        let mut v = PVec::new();
        for l in 0..2 {
            let a: i16 = rng.gen_range(1..=3);
            let b: i16 = rng.gen_range(1..=(5 - a));
            let c0 = rat(rng.gen_range(-3..=3), rng.gen_range(1..=3));
            let c1 = rat(rng.gen_range(-3..=3), 1);
            v.insert(l, &Poly::constant(c0) + &Poly::sym(Symbol::h(a, b)).scale(&c1));
        }
        values.insert(i, v);
    }
    LinearMapG { values }
}

fn pvec_item(label: String, indices: Vec<i32>, v: PVec) -> Item {
    Item::check(label, indices, pvec_to_poly(&v))
}

fn cocycle(cx: &Ctx) -> Result<Outcome, CliError> {
    let jmax = cx.jmax(4)?;
    let dmax = cx.bound("dkp-max", cx.cfg.dkp_max, 3)?;
    let seed = cx.cfg.seed.unwrap_or(0);
    cx.put("seed", seed);
    let mut out = Outcome::default();

    let bound = 2 * jmax;
    let sc = StructureConstants::closed_form(Stratum::BigCell, bound);
    let g = random_g(seed, 2 * bound);
    let psi = CocycleMap::coboundary(&g, &sc, bound)?;
    let nf = BigCellNormalizer::new(3 * jmax + 4);
    for j in 1..=jmax {
        for k in 1..=jmax {
            for m in 1..=jmax {
                let d = pvec_map(&cocycle_defect(&psi, &sc, j, k, m)?, |c| nf.reduce(c))?;
                out.items.push(pvec_item(format!("random-coboundary({j},{k},{m})"), vec![0, j, k, m], d));
            }
        }
    }

    let dbound = 2 * dmax;
    let sc = StructureConstants::closed_form(Stratum::BigCell, dbound);
    let psi = CocycleMap::dkp(dbound);
    let rw = DkpRewriter::new(3 * dmax + 1);
    let tangent = CocycleMap::from_delta(dbound);
    let tnf = BigCellNormalizer::new(3 * dmax + 1);
    for j in 1..=dmax {
        for k in 1..=dmax {
            for m in 1..=dmax {
                let d = pvec_map(&cocycle_defect(&psi, &sc, j, k, m)?, |c| rw.reduce(c))?;
                out.items.push(pvec_item(format!("dkp({j},{k},{m})"), vec![1, j, k, m], d));
                let d = pvec_map(&cocycle_defect(&tangent, &sc, j, k, m)?, |c| tnf.reduce(c))?;
                out.items.push(pvec_item(format!("tangent({j},{k},{m})"), vec![2, j, k, m], d));
            }
        }
    }
    out.notes.push(format!("random coboundary from ChaCha8 seed {seed}"));
    Ok(out)
}

fn coboundary(cx: &Ctx) -> Result<Outcome, CliError> {
    let jmax = cx.jmax(3)?;
    let bound = 2 * jmax;
    let sc = StructureConstants::closed_form(Stratum::BigCell, bound);
    let psi = CocycleMap::from_delta(bound);
    let nf = BigCellNormalizer::new(4 * jmax);
    let pi1: PVec = [(0, Poly::sym(Symbol::pi(0))), (1, Poly::sym(Symbol::pi(1)))].into_iter().collect();
    let g = LinearMapG::from_tangent(&psi, &sc, pi1, bound)?;
    let mut out = Outcome::default();
    for i in 0..=jmax {
        out.items.push(Item::value(format!("g(p{i})"), vec![0, i], g.as_polynomial(i)?));
    }
    for j in 0..=jmax {
        for k in 0..=jmax {
            let r = pvec_map(&coboundary_decompose(&psi, &g, &sc, j, k)?, |c| nf.reduce(c))?;
            out.items.push(pvec_item(format!("tangent - delta g ({j},{k})"), vec![1, j, k], r));
        }
    }
    let dkp = CocycleMap::dkp(bound);
    for j in 0..=jmax {
        for k in 0..=jmax {
            let sub = pvec_map(dkp.get(j, k)?, |c| Ok(u_to_tau(c)))?;
            let tau = tau_coboundary(j, k, bound)?;
            let r = &pvec_to_poly(&sub) - &pvec_to_poly(&tau);
            out.items.push(Item::both(format!("tau form ({j},{k})"), vec![2, j, k], pvec_to_poly(&tau), r));
        }
    }
    out.notes.push("g solved from the (1,k) equations with g(p1) = pi[0] + pi[1] p1".into());
    Ok(out)
}

fn jacobi(cx: &Ctx) -> Result<Outcome, CliError> {
    let n = cx.nmax(4)?;
    let mut out = Outcome::default();
    for (t, name, ps) in [(0, "darboux", PhaseSpace::darboux(n)), (1, "jet", PhaseSpace::jet_ansatz(n))] {
        for l in 1..=n {
            for k in 1..=n {
                for j in 1..=n {
                    let (a, b) = jacobi_defect(&ps, l, k, j)?;
                    out.items.push(Item::check(format!("{name} first({l},{k},{j})"), vec![t, 0, l, k, j], a));
                    out.items.push(Item::check(format!("{name} second({l},{k},{j})"), vec![t, 1, l, k, j], b));
                }
            }
        }
    }
    Ok(out)
}

fn poisson_ideal(cx: &Ctx) -> Result<Outcome, CliError> {
    let n = cx.nmax(6)?;
    let mut out = Outcome::default();
    let star = PhaseSpace::symbolic_star(n);
    let t = PoissonTensorLinear::symbolic(n);
    let linear = t.phase_space(n)?;
    for (s, name, ps) in [(0, "symbolic", &star), (1, "linear", &linear)] {
        for a in 2..=n {
            for b in 2..=n {
                out.items.push(Item::check(format!("{name} ideal({a},{b})"), vec![s, a, b], ideal_bracket_residue(a, b, ps)?));
            }
        }
    }
    for i in 1..=n {
        for k in 1..=n {
            let js = t.jstar(i, k)?;
            let r = &pstar_to_p(&js) - &t.jstar_via_schur(i, k)?;
            out.items.push(Item::both(format!("Jstar({i},{k})"), vec![2, i, k], js, r));
        }
    }
    Ok(out)
}

fn ansatz_constraints(cx: &Ctx) -> Result<Outcome, CliError> {
    let n = cx.nmax(5)?;
    let t = PoissonTensorLinear::symbolic(n + 1);
    let sys = alpha_beta_conditions(&t, n)?;
    let mut out = Outcome::default();
    for (idx, p) in &sys.items {
        let (i, k) = (idx[1], idx[2]);
        let (label, family) = if idx[0] == 0 {
            (format!("alpha({i},{k})"), ansatz_second(&j_sym, k, i))
        } else {
            (format!("beta({i},{k})"), ansatz_first(&j_sym, k - 1, i - 1))
        };
        out.items.push(Item::both(label, idx.clone(), p.clone(), p + &family));
    }
    for (idx, p) in &linear_ansatz_constraints(n, n).items {
        let name = if idx[0] == 1 { "first" } else { "second" };
        let mut ix = vec![2];
        ix.extend(idx);
        out.items.push(Item::value(format!("{name}({},{})", idx[1], idx[2]), ix, p.clone()));
    }
    out.notes.push("alpha(i,k) = -second(k,i), beta(i,k) = -first(k-1,i-1)".into());
    Ok(out)
}

fn equivalence(cx: &Ctx) -> Result<Outcome, CliError> {
    let n = cx.nmax(3)?;
    let r = equivalence_j_vs_delta(n)?;
    let mut out = Outcome::default();
    for it in r.items {
        let name = if it.indices[0] == 1 { "first" } else { "second" };
        let label = format!("{name}({},{})", it.indices[1], it.indices[2]);
        out.items.push(Item::check(label, it.indices, it.residual).with_trace(it.trace));
    }
    Ok(out)
}

fn darboux(cx: &Ctx) -> Result<Outcome, CliError> {
    let (n, m) = (cx.nmax(4)?, cx.mmax(4)?);
    let sys = darboux_system(n, m);
    let rw = DkpRewriter::new(3 * n.max(m));
    let mut out = Outcome::default();
    for ((label, eq), (_, r)) in sys.equations.iter().zip(darboux_residuals(&sys, &rw)?) {
        out.items.push(Item::both(label.clone(), vec![], eq.clone(), r));
    }
    Ok(out)
}

fn hirota(cx: &Ctx) -> Result<Outcome, CliError> {
    let form = cx.hirota_form();
    let (j, k, m) = (cx.jmax(4)?, cx.kmax(4)?, cx.mmax(4)?);
    let mut out = Outcome::default();
    for a in 1..=j {
        for b in 1..=k {
            for c in 1..=m {
                out.items.push(Item::value(format!("hirota({a},{b},{c})"), vec![a, b, c], hirota_equation(a, b, c, form)?));
            }
        }
    }
    Ok(out)
}

fn tau_substitution(cx: &Ctx) -> Result<Outcome, CliError> {
    let form = cx.hirota_form();
    let (j, k, m) = (cx.jmax(4)?, cx.kmax(4)?, cx.mmax(4)?);
    let mut out = Outcome::default();
    for t in tau_substitution_check(j, k, m, form)? {
        let [a, b, c] = t.indices;
        let trace = match &t.factor {
            Some(f) => vec![format!("factor {f}")],
            None if t.matched() => vec!["both sides vanish".into()],
            None => vec!["no rational factor".into()],
        };
        out.items.push(Item::both(format!("tau({a},{b},{c})"), vec![0, a, b, c], t.substituted, t.difference).with_trace(trace));
    }
    for ((i, l, n), p) in exactness_conditions(j.max(k), m) {
        out.items.push(Item::check(format!("exactness({i},{l},{n})"), vec![1, i, l, n], p));
    }
    out.notes.push("residual = substituted - factor * hirota, or the difference when no factor exists".into());
    Ok(out)
}

fn stratum1(cx: &Ctx) -> Result<Outcome, CliError> {
    let gauge_src = cx.cfg.gauge.clone().unwrap_or_else(|| "v[0]".into());
    cx.put("gauge", &gauge_src);
    let gauge = parse_poly(&gauge_src).map_err(|e| CliError::Config(format!("--gauge: {e}")))?;
    let h = stratum1_coisotropy(&gauge)?;
    let mut out = Outcome::default();
    out.items.push(Item::value("v2", vec![2], h.v2.clone()));
    out.items.push(Item::value("v1", vec![1], h.v1.clone()));
    out.items.push(Item::value("v0", vec![0], h.v0.clone()));
    let diff = compare_with_printed(&h);
    for (a, f) in h.flows.iter().rev() {
        let r = diff[a].clone();
        out.items.push(Item::both(format!("D[mu[{a}]; x4]"), vec![4, *a as i32], f.clone(), r));
    }
    out.items.push(Item::check("v1 printed - derived", vec![-1], diff[&-1].clone()));
    for (i, r) in h.residuals.iter().enumerate() {
        out.items.push(Item::check(format!("compatibility {i}"), vec![5, i as i32], r.clone()));
    }
    out.notes.push("w[4] stands for the x2-antiderivative of D[mu[4]; x3]".into());
    out.notes.push("the mu4 flow is compared with v1 substituted, the others with v[1] kept".into());
    Ok(out)
}

fn sigma12(cx: &Ctx) -> Result<Outcome, CliError> {
    let path = cx
        .cfg
        .generators
        .as_ref()
        .ok_or_else(|| CliError::Config("verify sigma12 needs --generators FILE; no generators ship with this tool".into()))?;
    let src = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let gens: Vec<Polynomial> = src
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| parse_poly(l).map_err(|e| CliError::Config(format!("{}: {e}", path.display()))))
        .collect::<Result<_, _>>()?;
    if gens.len() < 2 {
        return Err(CliError::Config("need at least two generators".into()));
    }
    let n = cx.nmax(5)?;
    let dirs: Vec<u8> = (2..=n.max(2) as u8).collect();
    let rs = RewriteSet::from_generators(&gens)?;
    let mut out = Outcome::default();
    for (a, g) in gens.iter().enumerate() {
        out.items.push(Item::value(format!("generator {a}"), vec![a as i32], g.clone()));
    }
    for a in 0..gens.len() {
        for b in (a + 1)..gens.len() {
            let r = rs.reduce(&darboux_bracket(&gens[a], &gens[b], &dirs))?;
            out.items.push(Item::check(format!("bracket({a},{b})"), vec![a as i32, b as i32], r));
        }
    }
    Ok(out)
}
