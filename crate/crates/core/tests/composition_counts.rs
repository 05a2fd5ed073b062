//! Ambiguity counts of mirror-image pairs agree: reversing words swaps the
//! R4 and R5 families and exchanges the roles of f and g in intersections.

use std::collections::BTreeMap;
use std::sync::Arc;

use opalg::algebra::{PMode, RbLieAlgebra};
use opalg::gsb::{enumerate_ambiguities, Bounds, Kind, PairKey};
use opalg::rules::{Family, RuleSet, RuleSystem};

use Family::*;

/// Intersections as (f, g); inclusions as (inner g, outer f). R3 inside R3
/// is its own mirror image; the R3 pair is R3 inside R4 against R3 inside R5,
/// the words `ld(P(x)) {q|_{u}{v}}` and `{q|_{u}{v}} ld(P(x))`.
const INTERSECTION: [((Family, Family), (Family, Family)); 4] = [
    ((R2, R4), (R5, R2)),
    ((R2, R6), (R6, R2)),
    ((R3, R5), (R4, R3)),
    ((R5, R6), (R6, R4)),
];
const INCLUDING: [((Family, Family), (Family, Family)); 7] = [
    ((R1, R4), (R1, R5)),
    ((R2, R4), (R2, R5)),
    ((R3, R4), (R3, R5)),
    ((R4, R3), (R5, R3)),
    ((R4, R4), (R5, R5)),
    ((R4, R5), (R5, R4)),
    ((R6, R4), (R6, R5)),
];

fn counts(text: &str, bounds: Bounds) -> BTreeMap<PairKey, usize> {
    let g = Arc::new(RbLieAlgebra::parse(text).unwrap());
    let rules = RuleSystem::new(g, RuleSet::T, PMode::Strict).unwrap();
    let mut out = BTreeMap::new();
    for case in enumerate_ambiguities(&rules, bounds) {
        *out.entry(case.pair()).or_default() += 1;
    }
    out
}

fn check(text: &str, bounds: Bounds) {
    let c = counts(text, bounds);
    let get = |kind, f, g| c.get(&PairKey { kind, f, g }).copied().unwrap_or(0);
    for ((f1, g1), (f2, g2)) in INTERSECTION {
        assert_eq!(
            get(Kind::Intersection, f1, g1),
            get(Kind::Intersection, f2, g2),
            "intersection ({})^({}) vs ({})^({}) at {bounds:?}",
            f1.form(),
            g1.form(),
            f2.form(),
            g2.form()
        );
    }
    for ((g1, f1), (g2, f2)) in INCLUDING {
        assert_eq!(
            get(Kind::Including, f1, g1),
            get(Kind::Including, f2, g2),
            "including ({})^({}) vs ({})^({}) at {bounds:?}",
            g1.form(),
            f1.form(),
            g2.form(),
            f2.form()
        );
    }
}

#[test]
fn mirrored_pairs_have_equal_counts() {
    for (d, k) in [(2, 1), (4, 2), (5, 2), (6, 3)] {
        let bounds = Bounds {
            max_degree: d,
            max_depth: k,
        };
        check("weight = 0\nbasis = x\nP x = x\n", bounds);
        check(
            "weight = 0\nbasis = x, y\nP x = 2*x + 3*y\nP y = 1/2*x\n",
            bounds,
        );
        check(
            "weight = -1\nbasis = y, x\nbracket x y = y\nP x = x\nP y = y\n",
            bounds,
        );
    }
}

#[test]
fn every_mirrored_pair_occurs() {
    let c = counts(
        "weight = 0\nbasis = x, y\nP x = 2*x + 3*y\nP y = 1/2*x\n",
        Bounds {
            max_degree: 5,
            max_depth: 2,
        },
    );
    for ((f, g), _) in INTERSECTION {
        assert!(
            c.contains_key(&PairKey {
                kind: Kind::Intersection,
                f,
                g
            }),
            "({})^({})",
            f.form(),
            g.form()
        );
    }
    for ((g, f), _) in INCLUDING {
        assert!(
            c.contains_key(&PairKey {
                kind: Kind::Including,
                f,
                g
            }),
            "({})^({})",
            g.form(),
            f.form()
        );
    }
}
