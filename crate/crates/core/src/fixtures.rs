//! Reference diagrams used by the tests, the acceptance suite and the CLI docs.

use crate::multisection::{Arc, Collection, Curve, MultisectionDiagram};
use crate::surface::{Monomial, RoseSurface, TwistSpec};

fn build(
    rose: RoseSurface,
    collections: &[(&str, &[(&str, &str)])],
    arcs: &[(&str, &[i64])],
    twist: Option<TwistSpec>,
) -> MultisectionDiagram {
    let cols = collections
        .iter()
        .map(|(name, curves)| Collection {
            name: name.to_string(),
            curves: curves
                .iter()
                .map(|(cn, w)| Curve {
                    name: cn.to_string(),
                    word: rose.parse_word(w).expect("fixture word"),
                })
                .collect(),
        })
        .collect();
    let arcs = arcs
        .iter()
        .map(|(n, v)| Arc {
            name: n.to_string(),
            dual: v.to_vec(),
        })
        .collect();
    MultisectionDiagram::new(rose, cols, arcs, twist).expect("fixture diagram")
}

fn names(ns: &[&str]) -> Vec<String> {
    ns.iter().map(|s| s.to_string()).collect()
}

/// Trisection of the disk bundle over the sphere with Euler number −2
/// (genus 2, two boundary components).
pub fn example1() -> MultisectionDiagram {
    let rose = RoseSurface::standard(2, 2)
        .unwrap()
        .with_names(names(&["alpha1", "beta2", "beta1", "alpha2", "d"]))
        .unwrap();
    build(
        rose,
        &[
            ("alpha", &[("alpha1", "alpha1"), ("alpha2", "alpha2")]),
            ("beta", &[("beta1", "beta1"), ("beta2", "beta2")]),
            (
                "gamma",
                &[
                    ("gamma1", "alpha1 beta1^-1 d"),
                    ("gamma2", "alpha2 beta1^-1 beta1^-1 beta2"),
                ],
            ),
        ],
        &[("e", &[0, 0, 0, 0, 1])],
        None,
    )
}

/// Genus-2 trisection with one boundary component; `twisted` adds `φ(x) = t`.
pub fn example2(twisted: bool) -> MultisectionDiagram {
    let rose = RoseSurface::standard(2, 1)
        .unwrap()
        .with_names(names(&["alpha", "beta", "x", "y"]))
        .unwrap();
    let twist = twisted.then(|| {
        TwistSpec::new(vec![
            Monomial::ONE,
            Monomial::ONE,
            Monomial::new(1, 1),
            Monomial::ONE,
        ])
    });
    build(
        rose,
        &[
            ("alpha", &[("alpha", "alpha")]),
            ("beta", &[("beta", "beta")]),
            ("gamma", &[("gamma", "alpha^-1 x y x^-1 alpha beta alpha^-1")]),
        ],
        &[("e", &[0, 0, 0, 1]), ("e'", &[0, 0, 1, 0])],
        twist,
    )
}

/// Closed genus-1 trisection with curves `a1`, `b1`, `a1 b1`.
pub fn cp2() -> MultisectionDiagram {
    let rose = RoseSurface::closed(1).unwrap();
    build(
        rose,
        &[
            ("alpha", &[("a", "a1")]),
            ("beta", &[("b", "b1")]),
            ("gamma", &[("c", "a1 b1")]),
        ],
        &[],
        None,
    )
}
