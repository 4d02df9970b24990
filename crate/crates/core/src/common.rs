//! Gács-Körner maximal common functions.
//!
//! Two values of a pair `(A, B)` share a label iff they are joined by an
//! alternating path `a b1 a1 b2 ... a'` of positive-probability pairs, i.e. they
//! lie in the same connected component of the bipartite support graph.
//! Component ids are the smallest participating value of the first variable.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::dist::{Rational, TripartiteDistribution, Var};
use crate::info;

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        Self { parent: (0..len).collect(), size: vec![1; len] }
    }

    fn find(&mut self, mut v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[v] != root {
            let next = self.parent[v];
            self.parent[v] = root;
            v = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.size[big] += self.size[small];
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub id: usize,
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    #[serde(with = "crate::serde_fraction")]
    pub prob: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonFunction {
    names: [String; 2],
    first_labels: BTreeMap<usize, usize>,
    second_labels: BTreeMap<usize, usize>,
    component_probs: BTreeMap<usize, Rational>,
}

impl CommonFunction {
    /// Maximal common function of a joint distribution given as
    /// `(a, b, p)` triples; zero-probability pairs are ignored.
    pub fn from_joint(
        names: [&str; 2],
        joint: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Self {
        let mut pairs: BTreeMap<(usize, usize), Rational> = BTreeMap::new();
        for (a, b, p) in joint {
            if !p.is_zero() {
                *pairs.entry((a, b)).or_insert_with(Rational::zero) += p;
            }
        }
        let mut index: BTreeMap<(u8, usize), usize> = BTreeMap::new();
        for (a, b) in pairs.keys() {
            let n = index.len();
            index.entry((0, *a)).or_insert(n);
            let n = index.len();
            index.entry((1, *b)).or_insert(n);
        }
        let mut uf = UnionFind::new(index.len());
        for (a, b) in pairs.keys() {
            uf.union(index[&(0, *a)], index[&(1, *b)]);
        }
        // Canonical id of a root: smallest first-variable value in it.
        let mut root_id: BTreeMap<usize, usize> = BTreeMap::new();
        for (&(side, v), &i) in &index {
            if side == 0 {
                let r = uf.find(i);
                root_id.entry(r).or_insert(v);
            }
        }
        let mut first_labels = BTreeMap::new();
        let mut second_labels = BTreeMap::new();
        for (&(side, v), &i) in &index {
            let id = root_id[&uf.find(i)];
            if side == 0 {
                first_labels.insert(v, id);
            } else {
                second_labels.insert(v, id);
            }
        }
        let mut component_probs: BTreeMap<usize, Rational> = BTreeMap::new();
        for ((a, _), p) in &pairs {
            *component_probs.entry(first_labels[a]).or_insert_with(Rational::zero) += p;
        }
        CommonFunction {
            names: [names[0].to_string(), names[1].to_string()],
            first_labels,
            second_labels,
            component_probs,
        }
    }

    pub fn names(&self) -> &[String; 2] {
        &self.names
    }

    pub fn first_labels(&self) -> &BTreeMap<usize, usize> {
        &self.first_labels
    }

    pub fn second_labels(&self) -> &BTreeMap<usize, usize> {
        &self.second_labels
    }

    pub fn component_probs(&self) -> &BTreeMap<usize, Rational> {
        &self.component_probs
    }

    pub fn component_count(&self) -> usize {
        self.component_probs.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.component_count() == 1
    }

    pub fn is_binary(&self) -> bool {
        self.component_count() == 2
    }

    /// Position of a component id in ascending id order.
    pub fn index_of_label(&self, label: usize) -> Option<usize> {
        self.component_probs.keys().position(|k| *k == label)
    }

    /// Canonical component index (0, 1, ...) of a first-variable value.
    pub fn index_of_first(&self, v: usize) -> Option<usize> {
        self.first_labels.get(&v).and_then(|l| self.index_of_label(*l))
    }

    pub fn index_of_second(&self, v: usize) -> Option<usize> {
        self.second_labels.get(&v).and_then(|l| self.index_of_label(*l))
    }

    pub fn components(&self) -> Vec<Component> {
        self.component_probs
            .iter()
            .map(|(id, p)| Component {
                id: *id,
                first: self.first_labels.iter().filter(|(_, l)| *l == id).map(|(v, _)| *v).collect(),
                second: self.second_labels.iter().filter(|(_, l)| *l == id).map(|(v, _)| *v).collect(),
                prob: p.clone(),
            })
            .collect()
    }
}

impl Serialize for CommonFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("CommonFunction", 2)?;
        st.serialize_field("pair", &self.names)?;
        st.serialize_field("components", &self.components())?;
        st.end()
    }
}

fn var_name(v: Var) -> &'static str {
    match v {
        Var::X => "X",
        Var::Y => "Y",
        Var::Z => "Z",
    }
}

/// `J_AB` of the pair `(first, second)` marginal of `d`.
pub fn common_function(d: &TripartiteDistribution, first: Var, second: Var) -> CommonFunction {
    assert_ne!(first, second, "a common function needs two distinct variables");
    CommonFunction::from_joint(
        [var_name(first), var_name(second)],
        d.events().iter().map(|(e, p)| (first.of(e), second.of(e), p.clone())),
    )
}

/// `J_{XY|Z}`: one common function of `p(x, y | z)` per positive-mass `z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionalCommonFunction {
    pub per_condition: BTreeMap<usize, CommonFunction>,
}

pub fn conditional_common_function(d: &TripartiteDistribution) -> ConditionalCommonFunction {
    let per_condition = d
        .slices()
        .keys()
        .map(|&z| {
            let cf = CommonFunction::from_joint(["X", "Y"], d.slice_conditional(z));
            (z, cf)
        })
        .collect();
    ConditionalCommonFunction { per_condition }
}

/// Entropy of the component distribution, in bits.
pub fn common_entropy(cf: &CommonFunction) -> f64 {
    if cf.is_trivial() {
        return 0.0;
    }
    info::shannon_entropy(cf.component_probs().values())
}
