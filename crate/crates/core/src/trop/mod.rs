//! Genus-zero one-part tropical leaky covers.
//!
//! A cover is a rooted tree of internal vertices (the root carries the `d`
//! end, label 0) together with a linear extension of the tree order: each
//! vertex of the target line has exactly one preimage vertex, and every vertex
//! sits to the left of its children. Edge weights are forced by the leaky
//! condition `d_l - d_r = k (val - 2)` at each vertex.

mod dot;
mod shapes;

use std::collections::HashMap;
use std::sync::Arc;

use dashmap::DashMap;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{big, factorial, multinomial, Rational};
use crate::error::{Error, Result};
use crate::profile::Profile;

pub use dot::cover_to_dot;
use shapes::{enumerate_shapes, Shape};

/// Internal vertex of a cover tree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CoverVertex {
    /// Attached end labels; label 0 is the `d` end, `i >= 1` is `nu_i`.
    pub ends: Vec<usize>,
    pub children: Vec<usize>,
    #[serde(skip)]
    pub parent: Option<usize>,
}

/// Rooted tree on internal vertices; vertex 0 is the root and vertices are
/// stored in preorder.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CoverTree {
    pub vertices: Vec<CoverVertex>,
}

impl CoverTree {
    fn from_shape(shape: &Shape) -> Self {
        fn walk(shape: &Shape, parent: Option<usize>, out: &mut Vec<CoverVertex>) -> usize {
            let idx = out.len();
            out.push(CoverVertex { ends: shape.ends.clone(), children: Vec::new(), parent });
            for child in &shape.children {
                let c = walk(child, Some(idx), out);
                out[idx].children.push(c);
            }
            idx
        }
        let mut vertices = Vec::new();
        walk(shape, None, &mut vertices);
        Self { vertices }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Valency: attached ends plus child edges plus the edge to the parent.
    pub fn valency(&self, v: usize) -> usize {
        let vx = &self.vertices[v];
        vx.ends.len() + vx.children.len() + usize::from(vx.parent.is_some())
    }

    /// End labels of the subtree hanging below `v`, `v` included.
    pub fn subtree_ends(&self, v: usize) -> Vec<usize> {
        let mut out = self.vertices[v].ends.clone();
        for &c in &self.vertices[v].children {
            out.extend(self.subtree_ends(c));
        }
        out.sort_unstable();
        out
    }

    fn subtree_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![1usize; self.len()];
        // preorder: children come after parents
        for v in (0..self.len()).rev() {
            if let Some(p) = self.vertices[v].parent {
                sizes[p] += sizes[v];
            }
        }
        sizes
    }

    /// Number of linear extensions of the tree order: `V! / prod_v |subtree(v)|`.
    pub fn linear_extension_count(&self) -> BigInt {
        let denom: BigInt = self.subtree_sizes().iter().map(|&s| BigInt::from(s)).product();
        factorial(self.len() as u64) / denom
    }

    /// All linear extensions, each as the list of vertices from left to right.
    pub fn linear_extensions(&self) -> Vec<Vec<usize>> {
        fn rec(tree: &CoverTree, avail: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if avail.is_empty() {
                out.push(prefix.clone());
                return;
            }
            for i in 0..avail.len() {
                let v = avail.swap_remove(i);
                let before = avail.len();
                avail.extend(tree.vertices[v].children.iter().copied());
                prefix.push(v);
                rec(tree, avail, prefix, out);
                prefix.pop();
                avail.truncate(before);
                avail.push(v);
                let last = avail.len() - 1;
                avail.swap(i, last);
            }
        }
        let mut out = Vec::new();
        if !self.is_empty() {
            rec(self, &mut vec![0], &mut Vec::new(), &mut out);
        }
        out
    }

    /// Weight of the edge entering each vertex (`None` for the root), solved
    /// bottom-up from the leaky condition at every vertex:
    /// `w_in(v) = sum_children w_in(c) + sum_{ends at v} nu + k (val(v) - 2)`.
    pub fn edge_weights(&self, nu: &[i64], k: i64) -> Vec<Option<i64>> {
        let mut inflow = vec![0i64; self.len()];
        for v in (0..self.len()).rev() {
            let vx = &self.vertices[v];
            let ends: i64 = vx.ends.iter().filter(|&&e| e != 0).map(|&e| nu[e - 1]).sum();
            let children: i64 = vx.children.iter().map(|&c| inflow[c]).sum();
            inflow[v] = ends + children + k * (self.valency(v) as i64 - 2);
        }
        (0..self.len())
            .map(|v| self.vertices[v].parent.map(|_| inflow[v]))
            .collect()
    }

    /// `prod_v (val(v) - 3)! / prod_{i in I_v} e_i!`, which is the multinomial
    /// of the exponents attached to `v`.
    pub fn vertex_product(&self, psi: &[u32]) -> BigInt {
        self.vertices
            .iter()
            .map(|vx| {
                let parts: Vec<u64> = vx.ends.iter().map(|&e| psi[e] as u64).collect();
                let top = parts.iter().sum();
                multinomial(top, &parts).expect("parts sum to top")
            })
            .product()
    }

    /// Labelled ends make every automorphism trivial; this checks the
    /// structural reason: no two siblings carry the same end set.
    pub fn has_trivial_automorphisms(&self) -> bool {
        self.vertices.iter().all(|vx| {
            let mut sets: Vec<Vec<usize>> = vx.children.iter().map(|&c| self.subtree_ends(c)).collect();
            let before = sets.len();
            sets.sort();
            sets.dedup();
            sets.len() == before && sets.iter().all(|s| !s.is_empty())
        })
    }
}

/// Multiplicity of a single cover.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverMultiplicity {
    pub edge_product: BigInt,
    pub vertex_product: Rational,
    pub total: Rational,
}

/// A tree together with the left-to-right order of its vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalCover {
    pub tree: Arc<CoverTree>,
    pub order: Vec<usize>,
}

impl TropicalCover {
    pub fn edge_weights(&self, p: &Profile) -> Vec<Option<i64>> {
        self.tree.edge_weights(p.nu(), p.k())
    }

    /// Weight of the edge entering `v`; the root has none.
    pub fn edge_weight(&self, p: &Profile, v: usize) -> Option<i64> {
        self.edge_weights(p)[v]
    }
}

fn check_genus_zero(p: &Profile) -> Result<()> {
    if p.genus() != 0 {
        return Err(Error::Unsupported(
            "tropical enumeration is implemented for genus 0 only".into(),
        ));
    }
    Ok(())
}

/// Multiplicity of a cover: product of internal edge weights times the
/// product of genus-zero vertex multiplicities (automorphisms are trivial).
pub fn cover_multiplicity(c: &TropicalCover, p: &Profile) -> CoverMultiplicity {
    let edge_product: BigInt = c
        .edge_weights(p)
        .into_iter()
        .flatten()
        .map(BigInt::from)
        .product();
    let vertex_product = big(c.tree.vertex_product(p.psi()));
    let total = big(edge_product.clone()) * &vertex_product;
    CoverMultiplicity { edge_product, vertex_product, total }
}

/// All tree shapes satisfying the valency (psi) conditions; edge weights not
/// yet checked.
pub fn cover_trees(m: usize, psi: &[u32]) -> Vec<Arc<CoverTree>> {
    enumerate_shapes(m, psi)
        .iter()
        .map(|s| Arc::new(CoverTree::from_shape(s)))
        .collect()
}

/// Streams every cover of a genus-zero profile: each valid tree paired with
/// each of its linear extensions. Trees with a non-positive edge weight are
/// not covers and are skipped.
pub fn enumerate_covers(p: &Profile) -> Result<impl Iterator<Item = TropicalCover>> {
    check_genus_zero(p)?;
    let nu = p.nu().to_vec();
    let k = p.k();
    let trees = cover_trees(p.m(), p.psi());
    Ok(trees
        .into_iter()
        .filter(move |t| t.edge_weights(&nu, k).into_iter().flatten().all(|w| w > 0))
        .flat_map(|tree| {
            let orders = tree.linear_extensions();
            orders
                .into_iter()
                .map(move |order| TropicalCover { tree: Arc::clone(&tree), order })
        }))
}

/// Tree shapes of one `(m, psi)` with everything that does not depend on the
/// weights folded into a single coefficient.
#[derive(Debug, Clone)]
pub struct TreeTemplates {
    m: usize,
    templates: Vec<Template>,
}

#[derive(Debug, Clone)]
struct Template {
    /// Bitmask over labels `1..=m` (bit `i - 1`) of the ends below each edge.
    edges: Vec<u32>,
    /// Linear extension count times vertex product.
    coeff: BigInt,
    coeff_small: Option<i128>,
}

impl TreeTemplates {
    pub fn new(m: usize, psi: &[u32]) -> Self {
        let templates = cover_trees(m, psi)
            .iter()
            .map(|tree| {
                let edges = (1..tree.len())
                    .map(|v| tree.subtree_ends(v).iter().fold(0u32, |acc, &e| acc | 1 << (e - 1)))
                    .collect();
                let coeff = tree.linear_extension_count() * tree.vertex_product(psi);
                let coeff_small = coeff.to_i128();
                Template { edges, coeff, coeff_small }
            })
            .collect();
        Self { m, templates }
    }

    pub fn tree_count(&self) -> usize {
        self.templates.len()
    }

    fn subset_weights(&self, nu: &[i64], k: i64) -> Vec<i64> {
        // weight of the edge above an end set S: nu(S) + k (|S| - 1)
        let mut w = vec![0i64; 1 << self.m];
        for mask in 1usize..w.len() {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let prev = if rest == 0 { -k } else { w[rest] };
            w[mask] = prev + nu[low] + k;
        }
        w
    }

    fn term(t: &Template, w: &[i64]) -> Option<BigInt> {
        let mut small = t.coeff_small;
        let mut weights = Vec::with_capacity(t.edges.len());
        for &e in &t.edges {
            let x = w[e as usize];
            if x <= 0 {
                return None;
            }
            weights.push(x);
            small = small.and_then(|s| s.checked_mul(x as i128));
        }
        Some(match small {
            Some(s) => BigInt::from(s),
            None => weights.iter().fold(t.coeff.clone(), |acc, &x| acc * x),
        })
    }

    /// Sum of multiplicities over all covers for the given weights.
    pub fn evaluate(&self, nu: &[i64], k: i64) -> Rational {
        let w = self.subset_weights(nu, k);
        let total: BigInt = self.templates.iter().filter_map(|t| Self::term(t, &w)).sum();
        big(total)
    }

    pub fn evaluate_parallel(&self, nu: &[i64], k: i64) -> Rational {
        let w = self.subset_weights(nu, k);
        let total = self
            .templates
            .par_iter()
            .filter_map(|t| Self::term(t, &w))
            .reduce(BigInt::zero, |a, b| a + b);
        big(total)
    }
}

/// The invariant `H_0((d, -nu), e)` as a weighted count of tropical covers.
pub fn tropical_count(p: &Profile) -> Result<Rational> {
    check_genus_zero(p)?;
    Ok(TreeTemplates::new(p.m(), p.psi()).evaluate_parallel(p.nu(), p.k()))
}

/// Straight summation over the cover stream, one term per linear extension.
pub fn tropical_count_streaming(p: &Profile) -> Result<Rational> {
    Ok(enumerate_covers(p)?
        .map(|c| cover_multiplicity(&c, p).total)
        .fold(Rational::zero(), |a, b| a + b))
}

/// Per-tree contributions, for diagnostics.
pub fn tree_contributions(p: &Profile) -> Result<Vec<(Arc<CoverTree>, BigInt, Rational)>> {
    check_genus_zero(p)?;
    let mut out = Vec::new();
    for tree in cover_trees(p.m(), p.psi()) {
        let weights = tree.edge_weights(p.nu(), p.k());
        if weights.iter().flatten().any(|&w| w <= 0) {
            continue;
        }
        let ext = tree.linear_extension_count();
        let c = TropicalCover { tree: Arc::clone(&tree), order: Vec::new() };
        let mult = cover_multiplicity(&c, p).total;
        out.push((tree, ext, mult));
    }
    Ok(out)
}

/// Caches tree templates across calls with the same `(m, psi)`.
#[derive(Debug, Default)]
pub struct TropicalCounter {
    cache: DashMap<Vec<u32>, Arc<TreeTemplates>>,
}

impl TropicalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn templates(&self, psi: &[u32]) -> Arc<TreeTemplates> {
        if let Some(t) = self.cache.get(psi) {
            return Arc::clone(&t);
        }
        let t = Arc::new(TreeTemplates::new(psi.len() - 1, psi));
        self.cache.insert(psi.to_vec(), Arc::clone(&t));
        t
    }

    pub fn count(&self, p: &Profile) -> Result<Rational> {
        check_genus_zero(p)?;
        Ok(self.templates(p.psi()).evaluate(p.nu(), p.k()))
    }
}

/// Serializable record of one cover for the `covers` listing.
#[derive(Debug, Clone, Serialize)]
pub struct CoverRecord {
    pub tree: CoverTree,
    pub order: Vec<usize>,
    #[serde(rename = "edgeWeights")]
    pub edge_weights: Vec<EdgeWeight>,
    pub multiplicity: crate::FractionJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct EdgeWeight {
    pub from: usize,
    pub to: usize,
    pub weight: i64,
}

impl CoverRecord {
    pub fn new(c: &TropicalCover, p: &Profile) -> Self {
        let edge_weights = c
            .edge_weights(p)
            .iter()
            .enumerate()
            .filter_map(|(v, w)| {
                w.map(|weight| EdgeWeight {
                    from: c.tree.vertices[v].parent.expect("non-root"),
                    to: v,
                    weight,
                })
            })
            .collect();
        Self {
            tree: (*c.tree).clone(),
            order: c.order.clone(),
            edge_weights,
            multiplicity: crate::FractionJson::from(&cover_multiplicity(c, p).total),
        }
    }
}

/// Groups covers by tree; used by tests checking extension independence.
pub fn covers_by_tree(p: &Profile) -> Result<HashMap<CoverTree, Vec<TropicalCover>>> {
    let mut out: HashMap<CoverTree, Vec<TropicalCover>> = HashMap::new();
    for c in enumerate_covers(p)? {
        out.entry((*c.tree).clone()).or_default().push(c);
    }
    Ok(out)
}
