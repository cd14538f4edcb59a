//! Derived operators, expanded into core formulas.
//!
//! Operators indexed by names or courts (`Lower`, `PBinding`, the quantified
//! `Against`, ...) expand into finite disjunctions and conjunctions over a
//! [`NamedContext`]. Iteration always follows the context's list order, so
//! identical inputs produce identical node sequences in a fresh arena.

use crate::model::{Tjcm, Val};

use super::{Arena, Builder};

/// The finite vocabularies that indexed operators range over.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NamedContext {
    pub decided_names: Vec<String>,
    pub courts: Vec<String>,
}

impl NamedContext {
    pub fn new(decided_names: Vec<String>, courts: Vec<String>) -> Self {
        NamedContext { decided_names, courts }
    }

    pub fn from_model(m: &Tjcm) -> Self {
        NamedContext {
            decided_names: m.decided_names().to_vec(),
            courts: m.jurisdiction().courts().iter().map(ToString::to_string).collect(),
        }
    }
}

/// Which reading of the `According^∀` clause of `ι^{n+1}` to build.
///
/// The displayed recursion guards the per-incuriam alternative with
/// `¬Lower(m)`, naming the precedent gone against; the semantic definition
/// asks that the according precedent not be higher than the case being
/// tested, i.e. `¬Lower(n)`. Only the latter agrees with the semantic
/// per-incuriam test on all models.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IotaForm {
    #[default]
    Repaired,
    AsPrinted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpandConfig {
    /// Largest `|Names_d|` for which the per-incuriam family is expanded.
    pub incuriam_cap: usize,
    pub iota_form: IotaForm,
}

impl Default for ExpandConfig {
    fn default() -> Self {
        ExpandConfig { incuriam_cap: 6, iota_form: IotaForm::Repaired }
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ExpandError {
    #[error(
        "per-incuriam expansion needs {decided} decided names, above the cap of {cap}; use the semantic engine instead"
    )]
    CapExceeded { decided: usize, cap: usize },
    #[error("iota level must be at least 1")]
    ZeroIota,
}

/// Builds derived operators into an arena, or any other [`Builder`].
///
/// The iota levels and the `Incuriam`/`Overruled` formulas are cached, so
/// repeated macro calls in one session reuse them.
pub struct Expander<'a, B: Builder = Arena> {
    target: &'a mut B,
    ctx: &'a NamedContext,
    cfg: ExpandConfig,
    iota: Vec<B::F>,
    incuriam: Option<B::F>,
    overruled: Option<B::F>,
}

impl<'a, B: Builder> Expander<'a, B> {
    pub fn new(target: &'a mut B, ctx: &'a NamedContext) -> Self {
        Self::with_config(target, ctx, ExpandConfig::default())
    }

    pub fn with_config(target: &'a mut B, ctx: &'a NamedContext, cfg: ExpandConfig) -> Self {
        Expander { target, ctx, cfg, iota: Vec::new(), incuriam: None, overruled: None }
    }

    pub fn builder(&mut self) -> &mut B {
        self.target
    }

    pub fn context(&self) -> &'a NamedContext {
        self.ctx
    }

    fn atom(&mut self, token: &str) -> B::F {
        self.target.atom(token)
    }

    fn and(&mut self, x: B::F, y: B::F) -> B::F {
        self.target.and(x, y)
    }

    fn and3(&mut self, x: B::F, y: B::F, z: B::F) -> B::F {
        let xy = self.target.and(x, y);
        self.target.and(xy, z)
    }

    fn not(&mut self, x: B::F) -> B::F {
        self.target.not(x)
    }

    fn or(&mut self, x: B::F, y: B::F) -> B::F {
        self.target.or(x, y)
    }

    /// `n ∧ φ` with `n` an atom token.
    fn guard(&mut self, n: &str, phi: B::F) -> B::F {
        let a = self.atom(n);
        self.and(a, phi)
    }

    /// `@_n φ = □(n → φ)`.
    pub fn at(&mut self, n: &str, phi: B::F) -> B::F {
        let a = self.atom(n);
        let imp = self.target.implies(a, phi);
        self.target.boxed(imp)
    }

    /// `F̂_n φ = n ∧ ⟨≤T⟩(¬⟨≤T⟩n ∧ φ)`: `φ` holds somewhere strictly later than the `n`-named state.
    pub fn fhat(&mut self, n: &str, phi: B::F) -> B::F {
        let a = self.atom(n);
        let later_n = self.target.tdiamond(a);
        let not_later_n = self.not(later_n);
        let body = self.and(not_later_n, phi);
        let d = self.target.tdiamond(body);
        self.and(a, d)
    }

    /// `P̂_{n,m} φ = n ∧ ◇(φ ∧ F̂_m n)`: an `m`-named `φ`-state lies strictly before the `n`-named state.
    pub fn phat(&mut self, n: &str, m: &str, phi: B::F) -> B::F {
        let a = self.atom(n);
        let f = self.fhat(m, a);
        let body = self.and(phi, f);
        let d = self.target.diamond(body);
        self.and(a, d)
    }

    /// `F̂φ = ⋁_{n∈Names_d} (n ∧ F̂_n φ)`.
    pub fn fhat_any(&mut self, phi: B::F) -> B::F {
        let ctx = self.ctx;
        let parts: Vec<_> = ctx
            .decided_names
            .iter()
            .map(|n| {
                let f = self.fhat(n, phi);
                self.guard(n, f)
            })
            .collect();
        self.target.any(parts)
    }

    /// `P̂φ = ⋁_{n,m∈Names_d} (n ∧ P̂_{n,m} φ)`.
    pub fn phat_any(&mut self, phi: B::F) -> B::F {
        let ctx = self.ctx;
        let mut parts = Vec::new();
        for n in &ctx.decided_names {
            for m in &ctx.decided_names {
                let p = self.phat(n, m, phi);
                parts.push(self.guard(n, p));
            }
        }
        self.target.any(parts)
    }

    fn court_pairs(&mut self, phi: B::F, higher_first: bool) -> B::F {
        let ctx = self.ctx;
        let mut parts = Vec::new();
        for c in &ctx.courts {
            for c2 in &ctx.courts {
                let here = self.atom(c);
                let rel = if higher_first { self.target.h(c, c2) } else { self.target.h(c2, c) };
                let there = self.atom(c2);
                let body = self.and(there, phi);
                let d = self.target.diamond(body);
                parts.push(self.and3(here, rel, d));
            }
        }
        self.target.any(parts)
    }

    /// `Lower φ = ⋁_{c,c'} (c ∧ H(c,c') ∧ ◇(c' ∧ φ))`.
    pub fn lower(&mut self, phi: B::F) -> B::F {
        self.court_pairs(phi, true)
    }

    /// `Higher φ = ⋁_{c,c'} (c ∧ H(c',c) ∧ ◇(c' ∧ φ))`.
    pub fn higher(&mut self, phi: B::F) -> B::F {
        self.court_pairs(phi, false)
    }

    /// `SameCourt φ = ⋁_c (c ∧ ◇(c ∧ φ))`.
    pub fn same_court(&mut self, phi: B::F) -> B::F {
        let ctx = self.ctx;
        let parts: Vec<_> = ctx
            .courts
            .iter()
            .map(|c| {
                let a = self.atom(c);
                let body = self.and(a, phi);
                let d = self.target.diamond(body);
                self.and(a, d)
            })
            .collect();
        self.target.any(parts)
    }

    /// `Supporting_{n,m} φ = P̂_{n,m} φ ∧ R∃(φ ∧ m)`.
    pub fn supporting(&mut self, n: &str, m: &str, phi: B::F) -> B::F {
        let p = self.phat(n, m, phi);
        let ma = self.atom(m);
        let body = self.and(phi, ma);
        let r = self.target.rdiamond(body);
        self.and(p, r)
    }

    /// `PBinding_{n,m} φ = ⋁_{ci,cj} (cj ∧ B(ci,cj) ∧ Supporting_{n,m}(ci ∧ φ))`.
    ///
    /// The `cj` conjunct pins the bound court to the court of the evaluation state.
    /// `m` should be a decided name; nothing here checks that the precedent is decided.
    pub fn pbinding(&mut self, n: &str, m: &str, phi: B::F) -> B::F {
        let ctx = self.ctx;
        let mut parts = Vec::new();
        for ci in &ctx.courts {
            let ca = self.atom(ci);
            let inner = self.and(ca, phi);
            let sup = self.supporting(n, m, inner);
            for cj in &ctx.courts {
                let here = self.atom(cj);
                let bind = self.target.b(ci, cj);
                parts.push(self.and3(here, bind, sup));
            }
        }
        self.target.any(parts)
    }

    /// `PwOver(ci) = ⋁_{cj≠ci} (cj ∧ H(cj,ci)) ∨ (ci ∧ ¬B(ci,ci))`.
    pub fn pw_over(&mut self, ci: &str) -> B::F {
        let ctx = self.ctx;
        let mut parts = Vec::new();
        for cj in ctx.courts.iter().filter(|c| c.as_str() != ci) {
            let a = self.atom(cj);
            let h = self.target.h(cj, ci);
            parts.push(self.and(a, h));
        }
        let a = self.atom(ci);
        let self_bound = self.target.b(ci, ci);
        let not_bound = self.not(self_bound);
        parts.push(self.and(a, not_bound));
        self.target.any(parts)
    }

    /// `POverruling_{n,m} φ = ⋁_{o,c} (n ∧ c ∧ ◇(φ ∧ t(ō) ∧ PwOver(c) ∧ Supporting_{m,n} t(o)))`.
    pub fn poverruling(&mut self, n: &str, m: &str, phi: B::F) -> B::F {
        let ctx = self.ctx;
        let mut parts = Vec::new();
        for o in Val::OUTCOMES {
            let opp = o.opposite().expect("decided outcome");
            for c in &ctx.courts {
                let na = self.atom(n);
                let ca = self.atom(c);
                let t_opp = self.target.dec(opp);
                let pw = self.pw_over(c);
                let t_o = self.target.dec(o);
                let sup = self.supporting(m, n, t_o);
                let a1 = self.and(phi, t_opp);
                let a2 = self.and(a1, pw);
                let body = self.and(a2, sup);
                let d = self.target.diamond(body);
                parts.push(self.and3(na, ca, d));
            }
        }
        self.target.any(parts)
    }

    fn against_or_according(&mut self, n: &str, m: &str, phi: B::F, against: bool) -> B::F {
        let mut parts = Vec::new();
        for o in Val::OUTCOMES {
            let t_o = self.target.dec(o);
            let target = if against { o.opposite().expect("decided outcome") } else { o };
            let t_target = self.target.dec(target);
            let inner = self.and(phi, t_target);
            let pb = self.pbinding(n, m, inner);
            parts.push(self.and(t_o, pb));
        }
        self.target.any(parts)
    }

    /// `Against_{n,m} φ = ⋁_o (t(o) ∧ PBinding_{n,m}(φ ∧ t(ō)))`.
    pub fn against(&mut self, n: &str, m: &str, phi: B::F) -> B::F {
        self.against_or_according(n, m, phi, true)
    }

    /// `According_{n,m} φ = ⋁_o (t(o) ∧ PBinding_{n,m}(φ ∧ t(o)))`.
    pub fn according(&mut self, n: &str, m: &str, phi: B::F) -> B::F {
        self.against_or_according(n, m, phi, false)
    }

    fn quantified(&mut self, phi: B::F, op: fn(&mut Self, &str, &str, B::F) -> B::F) -> B::F {
        let ctx = self.ctx;
        let mut parts = Vec::new();
        for n in &ctx.decided_names {
            for m in &ctx.decided_names {
                let inner = op(self, n, m, phi);
                parts.push(self.guard(n, inner));
            }
        }
        self.target.any(parts)
    }

    fn universal(&mut self, phi: B::F, op: fn(&mut Self, &str, &str, B::F) -> B::F) -> B::F {
        let ctx = self.ctx;
        let not_phi = self.not(phi);
        let mut parts = Vec::new();
        for n in &ctx.decided_names {
            let mut conj = Vec::new();
            for m in &ctx.decided_names {
                let inner = op(self, n, m, not_phi);
                conj.push(self.not(inner));
            }
            let all = self.target.all(conj);
            parts.push(self.guard(n, all));
        }
        self.target.any(parts)
    }

    /// `Against φ = ⋁_{n,m∈Names_d} (n ∧ Against_{n,m} φ)`.
    pub fn against_any(&mut self, phi: B::F) -> B::F {
        self.quantified(phi, Self::against)
    }

    /// `POverruling φ = ⋁_{n,m∈Names_d} (n ∧ POverruling_{n,m} φ)`.
    pub fn poverruling_any(&mut self, phi: B::F) -> B::F {
        self.quantified(phi, Self::poverruling)
    }

    /// `According^∀ φ = ⋁_n (n ∧ ⋀_m ¬According_{n,m} ¬φ)`.
    pub fn according_all(&mut self, phi: B::F) -> B::F {
        self.universal(phi, Self::according)
    }

    /// `POverruling^∀ φ = ⋁_n (n ∧ ⋀_m ¬POverruling_{n,m} ¬φ)`.
    pub fn poverruling_all(&mut self, phi: B::F) -> B::F {
        self.universal(phi, Self::poverruling)
    }

    fn check_cap(&self) -> Result<(), ExpandError> {
        let decided = self.ctx.decided_names.len();
        if decided > self.cfg.incuriam_cap {
            return Err(ExpandError::CapExceeded { decided, cap: self.cfg.incuriam_cap });
        }
        Ok(())
    }

    /// `(F̂ m ∧ SameCourt(m)) ∨ Higher(m)`: the according precedent was
    /// decided before `m` by the same court, or by a lower one.
    fn superseded_by(&mut self, m: &str) -> B::F {
        let ma = self.atom(m);
        let later = self.fhat_any(ma);
        let same = self.same_court(ma);
        let l = self.and(later, same);
        let h = self.higher(ma);
        self.or(l, h)
    }

    /// The formula `ι^level`; levels are built bottom-up and cached.
    pub fn iota(&mut self, level: usize) -> Result<B::F, ExpandError> {
        if level == 0 {
            return Err(ExpandError::ZeroIota);
        }
        self.check_cap()?;
        while self.iota.len() < level {
            let next = if self.iota.is_empty() { self.iota_base() } else { self.iota_step(*self.iota.last().unwrap()) };
            self.iota.push(next);
        }
        Ok(self.iota[level - 1])
    }

    fn iota_base(&mut self) -> B::F {
        let ctx = self.ctx;
        let mut parts = Vec::new();
        for m in &ctx.decided_names {
            let ma = self.atom(m);
            let against = self.against_any(ma);
            let sup = self.superseded_by(m);
            let acc = self.according_all(sup);
            parts.push(self.and(against, acc));
        }
        self.target.any(parts)
    }

    fn iota_step(&mut self, prev: B::F) -> B::F {
        let ctx = self.ctx;
        let not_prev = self.not(prev);
        let mut parts = Vec::new();
        for n in &ctx.decided_names {
            let na = self.atom(n);
            let lower_n = self.lower(na);
            let later_than_n = self.fhat_any(na);
            // every potential overruler of the precedent, decided before n, is itself per incuriam
            let imp = self.target.implies(later_than_n, prev);
            let overrulers_incuriam = self.poverruling_all(imp);
            // some potential overruler of the according precedent, decided before n, is not
            let ov_body = self.and(later_than_n, not_prev);
            let validly_overruled = self.poverruling_any(ov_body);
            for m in &ctx.decided_names {
                let ma = self.atom(m);
                let excused = self.or(not_prev, lower_n);
                let target = self.and3(ma, excused, overrulers_incuriam);
                let against = self.against_any(target);

                let guard_name = match self.cfg.iota_form {
                    IotaForm::Repaired => na,
                    IotaForm::AsPrinted => ma,
                };
                let lower_guard = self.lower(guard_name);
                let not_lower = self.not(lower_guard);
                let incuriam_alt = self.and(prev, not_lower);
                let sup = self.superseded_by(m);
                let alt = self.or(incuriam_alt, validly_overruled);
                let alt = self.or(alt, sup);
                let according = self.according_all(alt);

                let body = self.and3(na, against, according);
                parts.push(body);
            }
        }
        self.target.any(parts)
    }

    /// `Incuriam = ⋁_{1≤k≤|Names_d|} ⋀_{k≤j≤|Names_d|} ι^j`.
    pub fn incuriam(&mut self) -> Result<B::F, ExpandError> {
        if let Some(id) = self.incuriam {
            return Ok(id);
        }
        self.check_cap()?;
        let top = self.ctx.decided_names.len();
        let levels = (1..=top).map(|j| self.iota(j)).collect::<Result<Vec<_>, _>>()?;
        let mut disj = Vec::with_capacity(top);
        for k in 1..=top {
            let conj = self.target.all(levels[k - 1..].iter().copied());
            disj.push(conj);
        }
        let id = self.target.any(disj);
        self.incuriam = Some(id);
        Ok(id)
    }

    /// `Overruled = POverruling(¬Incuriam)`.
    pub fn overruled(&mut self) -> Result<B::F, ExpandError> {
        if let Some(id) = self.overruled {
            return Ok(id);
        }
        let inc = self.incuriam()?;
        let not_inc = self.not(inc);
        let id = self.poverruling_any(not_inc);
        self.overruled = Some(id);
        Ok(id)
    }

    /// `Binding_n φ = ⋁_m PBinding_{n,m}(φ ∧ ¬Overruled ∧ ¬(Incuriam ∧ SameCourt(n)))`.
    pub fn binding(&mut self, n: &str, phi: B::F) -> Result<B::F, ExpandError> {
        let overruled = self.overruled()?;
        let inc = self.incuriam()?;
        let na = self.atom(n);
        let same = self.same_court(na);
        let disregarded = self.and(inc, same);
        let not_overruled = self.not(overruled);
        let not_disregarded = self.not(disregarded);
        let inner = self.and3(phi, not_overruled, not_disregarded);
        let ctx = self.ctx;
        let parts: Vec<_> = ctx.decided_names.iter().map(|m| self.pbinding(n, m, inner)).collect();
        Ok(self.target.any(parts))
    }

    /// `BestBinding_n φ = ⋁_m (Binding_n(m ∧ φ) ∧ ¬Binding_n(Lower(m) ∨ (SameCourt(m) ∧ P̂ m)))`.
    pub fn best_binding(&mut self, n: &str, phi: B::F) -> Result<B::F, ExpandError> {
        let ctx = self.ctx;
        let mut parts = Vec::new();
        for m in &ctx.decided_names {
            let ma = self.atom(m);
            let mphi = self.and(ma, phi);
            let bound = self.binding(n, mphi)?;
            let lower = self.lower(ma);
            let same = self.same_court(ma);
            let earlier = self.phat_any(ma);
            let same_later = self.and(same, earlier);
            let dominating = self.or(lower, same_later);
            let dominated = self.binding(n, dominating)?;
            let not_dominated = self.not(dominated);
            parts.push(self.and(bound, not_dominated));
        }
        Ok(self.target.any(parts))
    }

    /// `Cl_n(o) = BestBinding_n t(o) ∧ ¬BestBinding_n t(ō)`.
    pub fn cl(&mut self, n: &str, o: Val) -> Result<B::F, ExpandError> {
        let opp = o.opposite().expect("Cl takes a decided outcome");
        let t_o = self.target.dec(o);
        let t_opp = self.target.dec(opp);
        let yes = self.best_binding(n, t_o)?;
        let no = self.best_binding(n, t_opp)?;
        let not_no = self.not(no);
        Ok(self.and(yes, not_no))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Node;

    fn ctx(names: &[&str], courts: &[&str]) -> NamedContext {
        NamedContext::new(names.iter().map(|s| s.to_string()).collect(), courts.iter().map(|s| s.to_string()).collect())
    }

    #[test]
    fn fhat_shape() {
        let c = ctx(&[], &[]);
        let mut arena = Arena::new();
        let mut ex = Expander::new(&mut arena, &c);
        let t0 = ex.builder().dec(Val::Zero);
        let got = ex.fhat("n1", t0);
        let a = &mut arena;
        let n1 = a.atom("n1");
        let neg_n1 = a.not(n1);
        let tb = a.tbox(neg_n1);
        let later_n1 = a.not(tb);
        let not_later = a.not(later_n1);
        let z = a.dec(Val::Zero);
        let body = a.and(not_later, z);
        let nb = a.not(body);
        let tb2 = a.tbox(nb);
        let d = a.not(tb2);
        let expected = a.and(n1, d);
        assert_eq!(got, expected);
    }

    #[test]
    fn expansion_is_deterministic() {
        let c = ctx(&["a", "b", "c"], &["x", "y"]);
        let build = || {
            let mut arena = Arena::new();
            let mut ex = Expander::new(&mut arena, &c);
            let root = ex.cl("b", Val::One).unwrap();
            (arena.nodes().to_vec(), root)
        };
        assert_eq!(build(), build());
    }

    #[test]
    fn cap_is_enforced() {
        let names: Vec<String> = (0..7).map(|i| format!("n{i}")).collect();
        let c = NamedContext::new(names, vec!["c".into()]);
        let mut arena = Arena::new();
        let mut ex = Expander::new(&mut arena, &c);
        assert_eq!(ex.incuriam(), Err(ExpandError::CapExceeded { decided: 7, cap: 6 }));
        assert_eq!(ex.iota(0), Err(ExpandError::ZeroIota));
        // the non-incuriam operators are unaffected
        let p = ex.builder().atom("p");
        ex.pbinding("n0", "n1", p);
    }

    #[test]
    fn empty_context_degenerates_to_bottom() {
        let c = ctx(&[], &[]);
        let mut arena = Arena::new();
        let mut ex = Expander::new(&mut arena, &c);
        let inc = ex.incuriam().unwrap();
        let bot = ex.builder().bottom();
        assert_eq!(inc, bot);
        assert!(matches!(arena.node(bot), Node::And(..)));
    }

    #[test]
    fn iota_levels_share_structure() {
        let c = ctx(&["a", "b", "c", "d"], &["x", "y", "z"]);
        let mut arena = Arena::new();
        let mut ex = Expander::new(&mut arena, &c);
        let i4 = ex.iota(4).unwrap();
        let total = arena.len();
        // a tree rendering would be astronomically larger
        assert!(arena.dag_size(i4) <= total);
        assert!(total < 2_000_000, "arena has {total} nodes");
    }
}
