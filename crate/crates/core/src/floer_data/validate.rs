use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{CriticalOrbit, FloerData};
use crate::linalg::q_int;
use crate::report::{ValidationReport, Violation};

/// Evaluates every instance of (A1)–(A4) and lists the nonzero residuals.
pub fn validate(data: &FloerData) -> ValidationReport {
    let c = data.coeffs();
    let free: Vec<&CriticalOrbit> = data.free_orbits().collect();
    let at = |k: i64| free.iter().filter(move |o| o.index == k).copied();
    let get = |map: &BTreeMap<(String, String), i64>, a: &str, b: &str| {
        BigInt::from(
            map.get(&(a.to_string(), b.to_string()))
                .copied()
                .unwrap_or(0),
        )
    };
    let n = |a: &str, b: &str| get(&c.n, a, b);
    let m = |a: &str, b: &str| get(&c.m, a, b);
    let u = |x: &str| BigInt::from(c.u.get(x).copied().unwrap_or(0));
    let v = |x: &str| BigInt::from(c.v.get(x).copied().unwrap_or(0));
    let theta = data.theta_index();

    let mut violations = Vec::new();
    let mut report = |constraint: &str, witness: Vec<&str>, residual: BigInt| {
        if !residual.is_zero() {
            violations.push(Violation {
                constraint: constraint.into(),
                witness: witness.into_iter().map(String::from).collect(),
                residual: q_int(&residual),
            });
        }
    };

    for a in &free {
        // (A1): n∘n between indices μ(a) and μ(a) − 2
        for e in at(a.index - 2) {
            let r: BigInt = at(a.index - 1)
                .map(|b| n(&a.id, &b.id) * n(&b.id, &e.id))
                .sum();
            report("A1", vec![&a.id, &e.id], r);
        }
        // (A2): n∘m − m∘n (+ v u through θ) between μ(a) and μ(a) − 3
        for d in at(a.index - 3) {
            let nm: BigInt = at(a.index - 1)
                .map(|b| n(&a.id, &b.id) * m(&b.id, &d.id))
                .sum();
            let mn: BigInt = at(a.index - 2)
                .map(|e| m(&a.id, &e.id) * n(&e.id, &d.id))
                .sum();
            let through = match theta {
                Some(t) if a.index - t == 1 && t - d.index == 2 => v(&a.id) * u(&d.id),
                _ => BigInt::zero(),
            };
            report("A2", vec![&a.id, &d.id], nm - mn + through);
        }
    }
    if let Some(t) = theta {
        // (A3): n followed by v, from index θ + 2
        for a in at(t + 2) {
            let r: BigInt = at(t + 1).map(|b| n(&a.id, &b.id) * v(&b.id)).sum();
            report("A3", vec![&a.id], r);
        }
        // (A4): u followed by n, down to index θ − 3
        for d in at(t - 3) {
            let r: BigInt = at(t - 2).map(|e| u(&e.id) * n(&e.id, &d.id)).sum();
            report("A4", vec![&d.id], r);
        }
    }
    ValidationReport::from_violations(violations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::floer_data::{CoefficientSystem, CriticalOrbit};
    use crate::linalg::q;

    #[test]
    fn worked_examples_validate() {
        assert!(validate(&FloerData::ex0()).ok);
        assert!(validate(&FloerData::ex1()).ok);
    }

    #[test]
    fn chain_of_two_counts_violates_a1() {
        let mut c = CoefficientSystem::default();
        c.n.insert(("a".into(), "b".into()), 1);
        c.n.insert(("b".into(), "c".into()), 1);
        let d = FloerData::new(
            "",
            vec![
                CriticalOrbit::free("a", 2),
                CriticalOrbit::free("b", 1),
                CriticalOrbit::free("c", 0),
            ],
            c,
        )
        .unwrap();
        let r = validate(&d);
        assert!(!r.ok);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].constraint, "A1");
        assert_eq!(r.violations[0].residual, q(1));
    }

    #[test]
    fn theta_term_enters_a2() {
        // a(1) → θ(0) → d(−2): v(a) u(d) must be cancelled by m∘n or n∘m
        let mut c = CoefficientSystem::default();
        c.v.insert("a".into(), 1);
        c.u.insert("d".into(), 1);
        let orbits = vec![
            CriticalOrbit::theta(0),
            CriticalOrbit::free("a", 1),
            CriticalOrbit::free("d", -2),
        ];
        let d = FloerData::new("", orbits.clone(), c.clone()).unwrap();
        let r = validate(&d);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].constraint, "A2");

        let mut fixed = c;
        let mut orbits = orbits;
        orbits.push(CriticalOrbit::free("e", -1));
        fixed.m.insert(("a".into(), "e".into()), 1);
        fixed.n.insert(("e".into(), "d".into()), 1);
        assert!(validate(&FloerData::new("", orbits, fixed).unwrap()).ok);
    }

    #[test]
    fn a3_and_a4() {
        let mut c = CoefficientSystem::default();
        c.v.insert("b".into(), 1);
        c.n.insert(("a".into(), "b".into()), 2);
        c.u.insert("e".into(), 1);
        c.n.insert(("e".into(), "f".into()), 3);
        let orbits = vec![
            CriticalOrbit::theta(0),
            CriticalOrbit::free("a", 2),
            CriticalOrbit::free("b", 1),
            CriticalOrbit::free("e", -2),
            CriticalOrbit::free("f", -3),
        ];
        let r = validate(&FloerData::new("", orbits, c).unwrap());
        let ids: Vec<&str> = r.violations.iter().map(|v| v.constraint.as_str()).collect();
        // b(1) and e(−2) also form an uncancelled θ term
        assert_eq!(ids, ["A2", "A3", "A4"]);
        assert_eq!(r.violations[1].residual, q(2));
        assert_eq!(r.violations[2].residual, q(3));
    }
}
