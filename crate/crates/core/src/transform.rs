//! Local graph rewrites that shift branches and unfold loops.
//!
//! Each operation matches a small named pattern inside a larger graph, rotates
//! a pair of basis states, and returns the rewritten graph together with the
//! unitary map that realizes it, so `T H_old T† = H_new` holds entrywise.
//! Nodes outside the pattern, and the pattern's anchor nodes, are untouched;
//! walks that start on them evolve identically on both graphs.
//!
//! Site selectors name the pattern roles explicitly (the node labels `1`,
//! `1'`, `2`, ... used in the figures); nothing is discovered automatically.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::basis::BasisTransform;
use crate::graph::{build_graph, Edge, NodeId, WeightedGraph};

#[derive(Debug, Error)]
pub enum TransformError {
    #[error("pattern mismatch: {0}")]
    PatternMismatch(String),
    #[error("degenerate amplitudes: {0}")]
    DegenerateAmplitudes(String),
    #[error(
        "condition violated: lhs = {lhs}, rhs = {rhs}, residual {residual:e} exceeds {tol:e} x scale {scale:e}"
    )]
    ConditionViolated {
        lhs: Complex64,
        rhs: Complex64,
        residual: f64,
        scale: f64,
        tol: f64,
    },
    #[error("free choice out of range: |a| = {given} exceeds A = {max}")]
    ChoiceOutOfRange { given: f64, max: f64 },
    #[error("division by zero operand `{0}` in condition check")]
    DivisionByZeroOperand(String),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
}

/// Role-to-label assignment naming one pattern instance inside a graph.
#[derive(Debug, Clone, Default)]
pub struct SiteSelector {
    map: BTreeMap<String, NodeId>,
}

impl SiteSelector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<'a, I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut map = BTreeMap::new();
        for (role, label) in pairs {
            map.insert(role.to_owned(), NodeId::from(label));
        }
        SiteSelector { map }
    }

    pub fn insert(&mut self, role: &str, label: impl Into<NodeId>) {
        self.map.insert(role.to_owned(), label.into());
    }

    pub fn get(&self, role: &str) -> Option<&NodeId> {
        self.map.get(role)
    }

    pub fn roles(&self) -> impl Iterator<Item = (&String, &NodeId)> {
        self.map.iter()
    }
}

/// A rewritten graph, the unitary basis map producing it, and the named
/// amplitudes the rewrite generated.
#[derive(Debug, Clone)]
pub struct RewriteResult {
    pub graph: WeightedGraph,
    pub transform: BasisTransform,
    pub report: Vec<(String, Complex64)>,
}

/// Amplitudes for a named equivalence condition.
#[derive(Debug, Clone, Copy)]
pub enum ConditionInput {
    /// Edge-sharing four-segment loop: requires `B'/B* = C'/A'*`.
    FourLoop {
        a_prime: Complex64,
        b: Complex64,
        b_prime: Complex64,
        c_prime: Complex64,
    },
    /// Two-segment branch: requires `|c2|^2 |b|^2 = |a|^2 |c1|^2`.
    TwoBranch {
        a: Complex64,
        b: Complex64,
        c1: Complex64,
        c2: Complex64,
    },
}

/// Scalar outcome of a condition check.
#[derive(Debug, Clone, Copy)]
pub struct ConditionReport {
    pub holds: bool,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
    pub scale: f64,
}

/// Evaluates a named condition with a scale-aware relative tolerance,
/// `residual <= tol * max(|lhs|, |rhs|, 1)`.
pub fn check_condition(
    input: &ConditionInput,
    tol: f64,
) -> Result<ConditionReport, TransformError> {
    let (lhs, rhs) = match *input {
        ConditionInput::FourLoop {
            a_prime,
            b,
            b_prime,
            c_prime,
        } => {
            if b.norm() == 0.0 {
                return Err(TransformError::DivisionByZeroOperand("B".into()));
            }
            if a_prime.norm() == 0.0 {
                return Err(TransformError::DivisionByZeroOperand("A'".into()));
            }
            (b_prime / b.conj(), c_prime / a_prime.conj())
        }
        ConditionInput::TwoBranch { a, b, c1, c2 } => (
            Complex64::new(c2.norm_sqr() * b.norm_sqr(), 0.0),
            Complex64::new(a.norm_sqr() * c1.norm_sqr(), 0.0),
        ),
    };
    let residual = (lhs - rhs).norm();
    let scale = lhs.norm().max(rhs.norm()).max(1.0);
    Ok(ConditionReport {
        holds: residual <= tol * scale,
        lhs,
        rhs,
        residual,
        scale,
    })
}

/// Resolved pattern instance: role names mapped to node indices.
struct Pattern<'g> {
    g: &'g WeightedGraph,
    idx: BTreeMap<&'static str, usize>,
}

impl<'g> Pattern<'g> {
    fn resolve(
        g: &'g WeightedGraph,
        site: &SiteSelector,
        roles: &[&'static str],
    ) -> Result<Self, TransformError> {
        let mut idx = BTreeMap::new();
        let mut seen = Vec::new();
        for &role in roles {
            let label = site.get(role).ok_or_else(|| {
                TransformError::PatternMismatch(format!("site selector is missing role `{role}`"))
            })?;
            let i = g.index_of(label).ok_or_else(|| {
                TransformError::PatternMismatch(format!(
                    "role `{role}` names unknown node `{label}`"
                ))
            })?;
            if seen.contains(&i) {
                return Err(TransformError::PatternMismatch(format!(
                    "role `{role}` repeats node `{label}`"
                )));
            }
            seen.push(i);
            idx.insert(role, i);
        }
        Ok(Pattern { g, idx })
    }

    fn at(&self, role: &str) -> usize {
        self.idx[role]
    }

    fn node(&self, role: &str) -> &NodeId {
        &self.g.nodes()[self.at(role)]
    }

    /// Requires the induced subgraph on the named roles to carry exactly the
    /// given edges (as unordered pairs). `optional` pairs may be absent.
    fn require_exact_edges(
        &self,
        required: &[(&str, &str)],
        optional: &[(&str, &str)],
    ) -> Result<(), TransformError> {
        let members: Vec<usize> = self.idx.values().copied().collect();
        let mut allowed: Vec<(usize, usize)> = Vec::new();
        for (u, v) in required {
            let (a, b) = (self.at(u), self.at(v));
            if !self.g.has_edge(a, b) {
                return Err(TransformError::PatternMismatch(format!(
                    "expected an edge between roles `{u}` and `{v}`"
                )));
            }
            allowed.push((a.min(b), a.max(b)));
        }
        for (u, v) in optional {
            let (a, b) = (self.at(u), self.at(v));
            allowed.push((a.min(b), a.max(b)));
        }
        for &a in &members {
            for &b in &members {
                if a < b && self.g.has_edge(a, b) && !allowed.contains(&(a, b)) {
                    return Err(TransformError::PatternMismatch(format!(
                        "unexpected in-pattern edge between `{}` and `{}`",
                        self.g.nodes()[a],
                        self.g.nodes()[b]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Rotated roles may not couple outside the pattern and may not carry a
    /// diagonal (unless `allow_diag`): their states are fully consumed.
    fn require_internal(&self, role: &str, allow_diag: bool) -> Result<(), TransformError> {
        let i = self.at(role);
        let members: Vec<usize> = self.idx.values().copied().collect();
        for n in self.g.neighbors(i) {
            if !members.contains(&n) {
                return Err(TransformError::PatternMismatch(format!(
                    "rotated node `{}` couples to `{}` outside the pattern",
                    self.g.nodes()[i],
                    self.g.nodes()[n]
                )));
            }
        }
        if !allow_diag && self.g.diag_energy(i) != 0.0 {
            return Err(TransformError::PatternMismatch(format!(
                "rotated node `{}` carries a diagonal energy",
                self.g.nodes()[i]
            )));
        }
        Ok(())
    }

    fn amp(&self, from: &str, to: &str) -> Complex64 {
        self.g.amp(self.at(from), self.at(to))
    }
}

/// Fresh labels `{base}{k}` for the smallest `k` that avoids every collision.
fn fresh_labels(g: &WeightedGraph, bases: &[&str]) -> Vec<NodeId> {
    for k in 1.. {
        let candidates: Vec<NodeId> = bases
            .iter()
            .map(|b| NodeId::new(format!("{b}{k}")))
            .collect();
        if candidates.iter().all(|c| !g.contains(c)) {
            return candidates;
        }
    }
    unreachable!()
}

/// Rebuilds the graph with `replace[i] = (old index, new label)` swapped in
/// place, all edges incident on replaced nodes dropped, diagonals on replaced
/// nodes dropped, and the given edges and diagonals appended. Edges with
/// exactly zero amplitude are omitted.
fn rebuild_graph(
    g: &WeightedGraph,
    replace: &[(usize, NodeId)],
    new_edges: Vec<Edge>,
    new_diag: Vec<(NodeId, f64)>,
) -> Result<WeightedGraph, TransformError> {
    let mut nodes = g.nodes().to_vec();
    for (i, label) in replace {
        nodes[*i] = label.clone();
    }
    let replaced: Vec<&NodeId> = replace
        .iter()
        .map(|(i, _)| &g.nodes()[*i])
        .collect();
    let mut edges: Vec<Edge> = g
        .edges()
        .iter()
        .filter(|e| !replaced.contains(&&e.from) && !replaced.contains(&&e.to))
        .cloned()
        .collect();
    edges.extend(
        new_edges
            .into_iter()
            .filter(|e| e.amp != Complex64::new(0.0, 0.0)),
    );
    let mut diag: Vec<(NodeId, f64)> = g
        .diag()
        .iter()
        .filter(|(n, _)| !replaced.contains(&n))
        .cloned()
        .collect();
    diag.extend(new_diag.into_iter().filter(|(_, e)| *e != 0.0));
    Ok(build_graph(nodes, edges, diag)?)
}

/// Transform that rotates one pair of old states `(p, q)` into new rows
/// `row_p`, `row_q` (given as `(coeff on p, coeff on q)` of the new kets) and
/// leaves every other node fixed.
fn pair_rotation(
    g: &WeightedGraph,
    p: usize,
    q: usize,
    ket_p: (Complex64, Complex64),
    ket_q: (Complex64, Complex64),
) -> DMatrix<Complex64> {
    let n = g.node_count();
    let mut t = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        if i != p && i != q {
            t[(i, i)] = Complex64::new(1.0, 0.0);
        }
    }
    // rows hold <new|old>: conjugate the ket coefficients
    t[(p, p)] = ket_p.0.conj();
    t[(p, q)] = ket_p.1.conj();
    t[(q, p)] = ket_q.0.conj();
    t[(q, q)] = ket_q.1.conj();
    t
}

fn result(
    g: &WeightedGraph,
    graph: WeightedGraph,
    t: DMatrix<Complex64>,
    report: Vec<(String, Complex64)>,
) -> RewriteResult {
    let chain_of = vec![0; t.nrows()];
    RewriteResult {
        graph,
        transform: BasisTransform::new(g.nodes().to_vec(), t, chain_of),
        report,
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Shifts a one-segment branch two nodes along the chain.
///
/// Pattern roles `1, 2, 1', 3` with edges `1-2 (a)`, `1-1' (a')`, `2-3 (b)`.
/// The rotated pair `(2, 1')` becomes `(x, x')` with `Omega_x =
/// sqrt(|a|^2 + |a'|^2)`, leaving edges `1-x (Omega_x)`, `x-3 (ab/Omega_x)`,
/// and the shifted branch `3-x' (a'b*/Omega_x)`.
pub fn shift_one_segment_branch(
    g: &WeightedGraph,
    site: &SiteSelector,
) -> Result<RewriteResult, TransformError> {
    let p = Pattern::resolve(g, site, &["1", "2", "1'", "3"])?;
    p.require_exact_edges(&[("1", "2"), ("1", "1'"), ("2", "3")], &[])?;
    p.require_internal("2", false)?;
    p.require_internal("1'", false)?;

    let a = p.amp("1", "2");
    let ap = p.amp("1", "1'");
    let b = p.amp("2", "3");
    let omega_x = (a.norm_sqr() + ap.norm_sqr()).sqrt();
    if omega_x == 0.0 {
        return Err(TransformError::DegenerateAmplitudes(
            "a = a' = 0 leaves nothing to rotate".into(),
        ));
    }

    let labels = fresh_labels(g, &["x", "x'"]);
    let (x, xp) = (labels[0].clone(), labels[1].clone());
    let amp_x3 = a * b / re(omega_x);
    let amp_3xp = ap * b.conj() / re(omega_x);

    let graph = rebuild_graph(
        g,
        &[(p.at("2"), x.clone()), (p.at("1'"), xp.clone())],
        vec![
            Edge::new(p.node("1").clone(), x.clone(), re(omega_x)),
            Edge::new(x.clone(), p.node("3").clone(), amp_x3),
            Edge::new(p.node("3").clone(), xp.clone(), amp_3xp),
        ],
        vec![],
    )?;
    let t = pair_rotation(
        g,
        p.at("2"),
        p.at("1'"),
        (a.conj() / re(omega_x), ap.conj() / re(omega_x)),
        (ap / re(omega_x), -a / re(omega_x)),
    );
    Ok(result(
        g,
        graph,
        t,
        vec![
            ("Omega_x".into(), re(omega_x)),
            ("x->3".into(), amp_x3),
            ("3->x'".into(), amp_3xp),
        ],
    ))
}

/// Reduces an edge-sharing three-segment loop, generating a self-loop pair.
///
/// Pattern roles `1, 2, 1', 3` with edges `1-2 (a)`, `1-1' (a')`, `1'-2 (b')`,
/// `2-3 (b)`. A diagonal energy on `1'` (plus the explicit `e1prime` argument,
/// for callers that track that energy outside the graph) is folded into the
/// rotated amplitudes; a diagonal on `1` passes through. With a nonzero
/// argument the rewrite acts on `H + e1prime |1'><1'|`, and the congruence
/// identity holds against that effective Hamiltonian.
/// The reported `E_x`, `E_x'` follow the one-sided convention of the figures;
/// the graph's diagonal entries are `2 Re(E_x)` and `2 Re(E_x')`.
pub fn reduce_three_loop(
    g: &WeightedGraph,
    site: &SiteSelector,
    e1prime: f64,
) -> Result<RewriteResult, TransformError> {
    let p = Pattern::resolve(g, site, &["1", "2", "1'", "3"])?;
    p.require_exact_edges(&[("1", "2"), ("1", "1'"), ("1'", "2"), ("2", "3")], &[])?;
    p.require_internal("2", false)?;
    p.require_internal("1'", true)?;

    let a = p.amp("1", "2");
    let ap = p.amp("1", "1'");
    let bp = p.amp("1'", "2");
    let b = p.amp("2", "3");
    let e1 = e1prime + g.diag_energy(p.at("1'"));
    let omega_sq = a.norm_sqr() + ap.norm_sqr();
    let omega_x = omega_sq.sqrt();
    if omega_x == 0.0 {
        return Err(TransformError::DegenerateAmplitudes(
            "a = a' = 0 leaves nothing to rotate".into(),
        ));
    }

    let amp_a = a * b / re(omega_x);
    let amp_ap = (bp * ap * ap - bp.conj() * a * a) / re(omega_sq) - re(e1) * a * ap / re(omega_sq);
    let amp_bp = ap.conj() * b / re(omega_x);
    let e_x = a.conj() * ap * bp / re(omega_sq) + re(e1 * ap.norm_sqr() / (2.0 * omega_sq));
    let e_xp = -a.conj() * ap * bp / re(omega_sq) + re(e1 * a.norm_sqr() / (2.0 * omega_sq));

    let labels = fresh_labels(g, &["x", "x'"]);
    let (x, xp) = (labels[0].clone(), labels[1].clone());
    let graph = rebuild_graph(
        g,
        &[(p.at("2"), x.clone()), (p.at("1'"), xp.clone())],
        vec![
            Edge::new(p.node("1").clone(), x.clone(), re(omega_x)),
            Edge::new(x.clone(), p.node("3").clone(), amp_a),
            Edge::new(x.clone(), xp.clone(), amp_ap),
            Edge::new(xp.clone(), p.node("3").clone(), amp_bp),
        ],
        vec![(x.clone(), 2.0 * e_x.re), (xp.clone(), 2.0 * e_xp.re)],
    )?;
    let t = pair_rotation(
        g,
        p.at("2"),
        p.at("1'"),
        (a.conj() / re(omega_x), ap.conj() / re(omega_x)),
        (ap / re(omega_x), -a / re(omega_x)),
    );
    Ok(result(
        g,
        graph,
        t,
        vec![
            ("Omega_x".into(), re(omega_x)),
            ("A".into(), amp_a),
            ("A'".into(), amp_ap),
            ("B'".into(), amp_bp),
            ("E_x".into(), e_x),
            ("E_x'".into(), e_xp),
        ],
    ))
}

/// Folds two adjacent one-segment branches into a four-segment loop.
///
/// Pattern roles `1, 2, 1', 2', 3, 4` with edges `1-2 (a)`, `1-1' (a')`,
/// `2-3 (b)`, `2-2' (b')`, `3-4 (c)`. The rotated pair `(2, 1')` becomes
/// `(x, x')`; the result is the loop `x-3-x'-2'-x` attached to the chain.
pub fn branches_to_fourloop(
    g: &WeightedGraph,
    site: &SiteSelector,
) -> Result<RewriteResult, TransformError> {
    let p = Pattern::resolve(g, site, &["1", "2", "1'", "2'", "3", "4"])?;
    p.require_exact_edges(
        &[("1", "2"), ("1", "1'"), ("2", "3"), ("2", "2'"), ("3", "4")],
        &[],
    )?;
    p.require_internal("2", false)?;
    p.require_internal("1'", false)?;

    let a = p.amp("1", "2");
    let ap = p.amp("1", "1'");
    let b = p.amp("2", "3");
    let bp = p.amp("2", "2'");
    let c = p.amp("3", "4");
    let omega_x = (a.norm_sqr() + ap.norm_sqr()).sqrt();
    if omega_x == 0.0 {
        return Err(TransformError::DegenerateAmplitudes(
            "a = a' = 0 leaves nothing to rotate".into(),
        ));
    }

    let amp_x3 = a * b / re(omega_x);
    let amp_3xp = ap * b.conj() / re(omega_x);
    let amp_x2p = a * bp / re(omega_x);
    let amp_xp2p = ap.conj() * bp / re(omega_x);

    let labels = fresh_labels(g, &["x", "x'"]);
    let (x, xp) = (labels[0].clone(), labels[1].clone());
    let graph = rebuild_graph(
        g,
        &[(p.at("2"), x.clone()), (p.at("1'"), xp.clone())],
        vec![
            Edge::new(p.node("1").clone(), x.clone(), re(omega_x)),
            Edge::new(x.clone(), p.node("3").clone(), amp_x3),
            Edge::new(p.node("3").clone(), xp.clone(), amp_3xp),
            Edge::new(x.clone(), p.node("2'").clone(), amp_x2p),
            Edge::new(xp.clone(), p.node("2'").clone(), amp_xp2p),
        ],
        vec![],
    )?;
    let t = pair_rotation(
        g,
        p.at("2"),
        p.at("1'"),
        (a.conj() / re(omega_x), ap.conj() / re(omega_x)),
        (ap / re(omega_x), -a / re(omega_x)),
    );
    Ok(result(
        g,
        graph,
        t,
        vec![
            ("Omega_x".into(), re(omega_x)),
            ("x->3".into(), amp_x3),
            ("3->x'".into(), amp_3xp),
            ("x->2'".into(), amp_x2p),
            ("x'->2'".into(), amp_xp2p),
            ("C".into(), c),
        ],
    ))
}

/// Unfolds an edge-sharing four-segment loop into two one-segment branches.
///
/// Pattern roles `1, x, x', 2', 3, 4` with edges `1-x (A)`, `x-3 (B)`,
/// `3-x' (B')`, `x-2' (A')`, `2'-x' (C')`, `3-4 (C)`. Requires
/// `B'/B* = C'/A'*` within `tol`; the loop with `B' = C' = 0` is accepted as
/// the trivial case. The rotated pair `(x, x')` becomes the branch nodes
/// `(y, y')` with `b = Omega_y = sqrt(|B|^2 + |B'|^2)` chosen real.
///
/// Only this ratio condition (whose mirror under swapping the two loop paths
/// coincides with it) is tested; it is sufficient for the rewrite but not
/// known to exhaust every loop that admits some chain-equivalent form.
pub fn fourloop_to_branches(
    g: &WeightedGraph,
    site: &SiteSelector,
    tol: f64,
) -> Result<RewriteResult, TransformError> {
    let p = Pattern::resolve(g, site, &["1", "x", "x'", "2'", "3", "4"])?;
    p.require_exact_edges(
        &[("1", "x"), ("x", "3"), ("3", "4")],
        &[("3", "x'"), ("x", "2'"), ("2'", "x'")],
    )?;
    p.require_internal("x", false)?;
    p.require_internal("x'", false)?;

    let amp_a = p.amp("1", "x");
    let amp_b = p.amp("x", "3");
    let amp_bp = p.amp("3", "x'");
    let amp_ap = p.amp("x", "2'");
    let amp_cp = p.amp("2'", "x'");
    let c = p.amp("3", "4");

    let trivial = amp_bp.norm() == 0.0 && amp_cp.norm() == 0.0;
    if !trivial {
        let report = check_condition(
            &ConditionInput::FourLoop {
                a_prime: amp_ap,
                b: amp_b,
                b_prime: amp_bp,
                c_prime: amp_cp,
            },
            tol,
        );
        match report {
            Ok(r) if r.holds => {}
            Ok(r) => {
                return Err(TransformError::ConditionViolated {
                    lhs: r.lhs,
                    rhs: r.rhs,
                    residual: r.residual,
                    scale: r.scale,
                    tol,
                })
            }
            Err(TransformError::DivisionByZeroOperand(op)) => {
                return Err(TransformError::ConditionViolated {
                    lhs: if op == "B" { Complex64::new(f64::INFINITY, 0.0) } else { amp_bp / amp_b.conj() },
                    rhs: if op == "A'" { Complex64::new(f64::INFINITY, 0.0) } else { amp_cp / amp_ap.conj() },
                    residual: f64::INFINITY,
                    scale: 1.0,
                    tol,
                })
            }
            Err(e) => return Err(e),
        }
    }

    let omega_y = (amp_b.norm_sqr() + amp_bp.norm_sqr()).sqrt();
    if omega_y == 0.0 {
        return Err(TransformError::DegenerateAmplitudes(
            "B = B' = 0 leaves the loop disconnected from the chain".into(),
        ));
    }

    // past the gates above, B != 0 whenever A' != 0 needs dividing
    let a = amp_a * amp_b / re(omega_y);
    let ap = amp_a * amp_bp / re(omega_y);
    let b = re(omega_y);
    let bp = if amp_ap.norm() == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        amp_ap * re(omega_y) / amp_b
    };

    let labels = fresh_labels(g, &["y", "y'"]);
    let (y, yp) = (labels[0].clone(), labels[1].clone());
    let graph = rebuild_graph(
        g,
        &[(p.at("x"), y.clone()), (p.at("x'"), yp.clone())],
        vec![
            Edge::new(p.node("1").clone(), y.clone(), a),
            Edge::new(p.node("1").clone(), yp.clone(), ap),
            Edge::new(y.clone(), p.node("3").clone(), b),
            Edge::new(y.clone(), p.node("2'").clone(), bp),
        ],
        vec![],
    )?;
    let t = pair_rotation(
        g,
        p.at("x"),
        p.at("x'"),
        (amp_b / re(omega_y), amp_bp.conj() / re(omega_y)),
        (amp_bp / re(omega_y), -amp_b.conj() / re(omega_y)),
    );
    Ok(result(
        g,
        graph,
        t,
        vec![
            ("Omega_y".into(), re(omega_y)),
            ("a".into(), a),
            ("a'".into(), ap),
            ("b".into(), b),
            ("b'".into(), bp),
            ("c".into(), c),
        ],
    ))
}

/// Reduces a rhomboidal four-segment insertion to a one-segment branch.
///
/// Pattern roles `0, 1, 2, 3` with edges `0-1 (a)`, `1-2 (b)`, `3-2 (c)`,
/// `0-3 (d)`; the square attaches to the rest of the graph via the opposite
/// corners `0` and `2`. The rotated pair `(1, 3)` becomes `(x, x')` with
/// `A = Omega_x = sqrt(|a|^2 + |d|^2)`, `B = (ab + cd)/Omega_x`,
/// `C = (b*d - ac*)/Omega_x`.
pub fn rhomboid_reduce(
    g: &WeightedGraph,
    site: &SiteSelector,
) -> Result<RewriteResult, TransformError> {
    let p = Pattern::resolve(g, site, &["0", "1", "2", "3"])?;
    p.require_exact_edges(&[("0", "1"), ("1", "2"), ("3", "2"), ("0", "3")], &[])?;
    p.require_internal("1", false)?;
    p.require_internal("3", false)?;

    let a = p.amp("0", "1");
    let b = p.amp("1", "2");
    let c = p.amp("3", "2");
    let d = p.amp("0", "3");
    let omega_x = (a.norm_sqr() + d.norm_sqr()).sqrt();
    if omega_x == 0.0 {
        return Err(TransformError::DegenerateAmplitudes(
            "a = d = 0 leaves nothing to rotate".into(),
        ));
    }

    let amp_b = (a * b + c * d) / re(omega_x);
    let amp_c = (b.conj() * d - a * c.conj()) / re(omega_x);

    let labels = fresh_labels(g, &["x", "x'"]);
    let (x, xp) = (labels[0].clone(), labels[1].clone());
    let graph = rebuild_graph(
        g,
        &[(p.at("1"), x.clone()), (p.at("3"), xp.clone())],
        vec![
            Edge::new(p.node("0").clone(), x.clone(), re(omega_x)),
            Edge::new(x.clone(), p.node("2").clone(), amp_b),
            Edge::new(p.node("2").clone(), xp.clone(), amp_c),
        ],
        vec![],
    )?;
    let t = pair_rotation(
        g,
        p.at("1"),
        p.at("3"),
        (a.conj() / re(omega_x), d.conj() / re(omega_x)),
        (d / re(omega_x), -a / re(omega_x)),
    );
    Ok(result(
        g,
        graph,
        t,
        vec![
            ("A".into(), re(omega_x)),
            ("B".into(), amp_b),
            ("C".into(), amp_c),
        ],
    ))
}

/// Expands a one-segment branch back into a rhomboidal square.
///
/// Pattern roles `0, x, 2, x'` with edges `0-x (A)`, `x-2 (B)`, `2-x' (C)`.
/// The caller picks `a` (any complex with `|a| <= |A|`) and the phase of `d`;
/// `|d| = sqrt(|A|^2 - |a|^2)` follows. Reducing the output reproduces
/// `(A, B, C)` when `A` is real nonnegative (the gauge every reduction emits).
pub fn rhomboid_expand(
    g: &WeightedGraph,
    site: &SiteSelector,
    a_choice: Complex64,
    argd: f64,
) -> Result<RewriteResult, TransformError> {
    let p = Pattern::resolve(g, site, &["0", "x", "2", "x'"])?;
    p.require_exact_edges(&[("0", "x"), ("x", "2")], &[("2", "x'")])?;
    p.require_internal("x", false)?;
    p.require_internal("x'", false)?;

    let amp_a = p.amp("0", "x");
    let amp_b = p.amp("x", "2");
    let amp_c = p.amp("2", "x'");
    let a_mag = amp_a.norm();
    if a_mag == 0.0 {
        return Err(TransformError::DegenerateAmplitudes(
            "A = 0 leaves nothing to expand".into(),
        ));
    }
    if a_choice.norm() > a_mag * (1.0 + 1e-12) {
        return Err(TransformError::ChoiceOutOfRange {
            given: a_choice.norm(),
            max: a_mag,
        });
    }

    let a = a_choice;
    let d_mag = (a_mag * a_mag - a.norm_sqr()).max(0.0).sqrt();
    let d = Complex64::from_polar(d_mag, argd);
    let denom = re(a_mag * a_mag);
    let b = (d * amp_a.conj() * amp_c.conj() + a.conj() * amp_a * amp_b) / denom;
    let c = (-a * amp_a.conj() * amp_c.conj() + d.conj() * amp_a * amp_b) / denom;

    let labels = fresh_labels(g, &["y", "y'"]);
    let (y, yp) = (labels[0].clone(), labels[1].clone());
    let graph = rebuild_graph(
        g,
        &[(p.at("x"), y.clone()), (p.at("x'"), yp.clone())],
        vec![
            Edge::new(p.node("0").clone(), y.clone(), a),
            Edge::new(y.clone(), p.node("2").clone(), b),
            Edge::new(yp.clone(), p.node("2").clone(), c),
            Edge::new(p.node("0").clone(), yp.clone(), d),
        ],
        vec![],
    )?;
    let t = pair_rotation(
        g,
        p.at("x"),
        p.at("x'"),
        (a / amp_a, (d / amp_a).conj()),
        (d / amp_a, -(a / amp_a).conj()),
    );
    Ok(result(
        g,
        graph,
        t,
        vec![
            ("a".into(), a),
            ("b".into(), b),
            ("c".into(), c),
            ("d".into(), d),
        ],
    ))
}

/// Reduces a six-segment symmetric loop (or, with the `2'-3` edge absent, a
/// two-segment branch) to an edge-sharing four-segment loop.
///
/// Pattern roles `0, 1, 2, 1', 2', 3` with edges `0-1 (a)`, `0-2 (b)`,
/// `1-1' (c1)`, `2-2' (c2)`, `1'-3 (a')`, and optionally `2'-3 (b')`.
/// Two rotations apply: `(1, 2) -> (x, x')` with `Omega_x` and
/// `(1', 2') -> (y, y')` with `Omega_y = sqrt(|a c1|^2 + |b c2|^2)`.
/// The rewrite always succeeds; whether the produced loop reduces further is
/// decided by [`check_condition`] on the amplitudes it reports.
pub fn sixloop_reduce(
    g: &WeightedGraph,
    site: &SiteSelector,
) -> Result<RewriteResult, TransformError> {
    let p = Pattern::resolve(g, site, &["0", "1", "2", "1'", "2'", "3"])?;
    p.require_exact_edges(
        &[("0", "1"), ("0", "2"), ("1", "1'"), ("2", "2'"), ("1'", "3")],
        &[("2'", "3")],
    )?;
    for role in ["1", "2", "1'", "2'"] {
        p.require_internal(role, false)?;
    }

    let a = p.amp("0", "1");
    let b = p.amp("0", "2");
    let c1 = p.amp("1", "1'");
    let c2 = p.amp("2", "2'");
    let ap = p.amp("1'", "3");
    let bp = p.amp("2'", "3");

    let omega_x = (a.norm_sqr() + b.norm_sqr()).sqrt();
    let omega_y = ((a * c1).norm_sqr() + (b * c2).norm_sqr()).sqrt();
    if omega_x == 0.0 {
        return Err(TransformError::DegenerateAmplitudes(
            "a = b = 0 leaves nothing to rotate".into(),
        ));
    }
    if omega_y == 0.0 {
        return Err(TransformError::DegenerateAmplitudes(
            "a c1 = b c2 = 0 degenerates the second rotation".into(),
        ));
    }

    let amp_xy = re(omega_y / omega_x);
    let amp_yxp = a * b * re((c1.norm_sqr() - c2.norm_sqr()) / (omega_x * omega_y));
    let amp_xpyp = c1 * c2 * re(omega_x / omega_y);
    let amp_y3 = (a * ap * c1 + b * bp * c2) / re(omega_y);
    let amp_3yp = (ap.conj() * b * c2 - a * bp.conj() * c1) / re(omega_y);

    let labels = fresh_labels(g, &["x", "x'", "y", "y'"]);
    let (x, xp, y, yp) = (
        labels[0].clone(),
        labels[1].clone(),
        labels[2].clone(),
        labels[3].clone(),
    );
    let graph = rebuild_graph(
        g,
        &[
            (p.at("1"), x.clone()),
            (p.at("2"), xp.clone()),
            (p.at("1'"), y.clone()),
            (p.at("2'"), yp.clone()),
        ],
        vec![
            Edge::new(p.node("0").clone(), x.clone(), re(omega_x)),
            Edge::new(x.clone(), y.clone(), amp_xy),
            Edge::new(y.clone(), xp.clone(), amp_yxp),
            Edge::new(xp.clone(), yp.clone(), amp_xpyp),
            Edge::new(y.clone(), p.node("3").clone(), amp_y3),
            Edge::new(p.node("3").clone(), yp.clone(), amp_3yp),
        ],
        vec![],
    )?;

    // two independent pair rotations assembled into one transform
    let n = g.node_count();
    let mut t = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        if ![p.at("1"), p.at("2"), p.at("1'"), p.at("2'")].contains(&i) {
            t[(i, i)] = Complex64::new(1.0, 0.0);
        }
    }
    let (i1, i2, i1p, i2p) = (p.at("1"), p.at("2"), p.at("1'"), p.at("2'"));
    // |x> = (a* |1> + b* |2>)/Omega_x, |x'> = (b |1> - a |2>)/Omega_x
    t[(i1, i1)] = a / re(omega_x);
    t[(i1, i2)] = b / re(omega_x);
    t[(i2, i1)] = b.conj() / re(omega_x);
    t[(i2, i2)] = -a.conj() / re(omega_x);
    // |y> = (a* c1* |1'> + b* c2* |2'>)/Omega_y, |y'> = (b c2 |1'> - a c1 |2'>)/Omega_y
    t[(i1p, i1p)] = a * c1 / re(omega_y);
    t[(i1p, i2p)] = b * c2 / re(omega_y);
    t[(i2p, i1p)] = (b * c2).conj() / re(omega_y);
    t[(i2p, i2p)] = -(a * c1).conj() / re(omega_y);

    Ok(result(
        g,
        graph,
        t,
        vec![
            ("Omega_x".into(), re(omega_x)),
            ("Omega_y".into(), re(omega_y)),
            ("x->y".into(), amp_xy),
            ("y->x'".into(), amp_yxp),
            ("x'->y'".into(), amp_xpyp),
            ("y->3".into(), amp_y3),
            ("3->y'".into(), amp_3yp),
        ],
    ))
}
