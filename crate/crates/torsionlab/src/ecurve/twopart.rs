//! The 2-primary torsion engine: breadth-first halving chains from the full
//! 2-torsion, over K or over a quadratic extension L.

use super::{Curve, GroupShape, Point, TorsionGroup};
use crate::field::FieldElem;

/// 2-Sylow data: the shape, all elements found, and generator witnesses.
#[derive(Debug, Clone)]
pub struct TwoPart<F: FieldElem> {
    pub group: TorsionGroup<F>,
    pub elements: Vec<Point<F>>,
}

/// Compute the full 2-primary subgroup over the coefficient field by BFS
/// halving, bounded by 2^v2cap on the subgroup order.
pub fn two_primary_torsion<F: FieldElem>(curve: &Curve<F>, v2cap: u32) -> TwoPart<F> {
    let mut known: Vec<Point<F>> = curve.two_torsion();
    let mut frontier: Vec<Point<F>> = known.clone();
    let mut level: u32 = 1; // current max order is 2^level
    let cap_order = 1u64 << v2cap.min(16);
    while !frontier.is_empty() && (known.len() as u64) < cap_order && level < v2cap.min(16) {
        let mut next: Vec<Point<F>> = Vec::new();
        for p in &frontier {
            if p.is_infinity() {
                continue;
            }
            for half in curve.halve_point(p) {
                if !known.contains(&half) && !next.contains(&half) {
                    next.push(half);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        known.extend(next.iter().cloned());
        frontier = next;
        level += 1;
    }
    // Structure from element counts: |E[2^k]| doubles per invariant factor.
    let n = known.len() as u64;
    debug_assert!(n.is_power_of_two());
    let max_order = 1u64 << level;
    let b = level;
    let total_exp = n.trailing_zeros();
    let a = total_exp - b;
    debug_assert!(a <= b, "2-part ranks out of order: a={a} b={b}");
    let shape = GroupShape::new(1 << a, 1 << b);

    // Generator of maximal order from the last frontier.
    let mut gens: Vec<Point<F>> = Vec::new();
    if shape.n > 1 {
        let g_big = frontier
            .iter()
            .find(|p| curve.order_of_point(p, max_order) == Some(max_order))
            .cloned()
            .unwrap_or_else(|| {
                known
                    .iter()
                    .find(|p| curve.order_of_point(p, max_order) == Some(max_order))
                    .cloned()
                    .expect("an element of maximal order exists")
            });
        if shape.m > 1 {
            // Find an order-2^a companion spanning the full group with g_big.
            let big_span: Vec<Point<F>> = multiples(curve, &g_big, shape.n);
            let g_small = known
                .iter()
                .find(|h| {
                    curve.order_of_point(h, shape.m) == Some(shape.m)
                        && span_size(curve, &big_span, h, shape.m) == n
                })
                .cloned()
                .expect("independent companion generator exists");
            gens.push(g_small);
        }
        gens.push(g_big);
    }
    TwoPart {
        group: TorsionGroup {
            shape,
            gens,
        },
        elements: known,
    }
}

fn multiples<F: FieldElem>(curve: &Curve<F>, p: &Point<F>, order: u64) -> Vec<Point<F>> {
    let mut out = vec![Point::Infinity];
    let mut acc = p.clone();
    for _ in 1..order {
        out.push(acc.clone());
        acc = curve.add_points(&acc, p);
    }
    out
}

fn span_size<F: FieldElem>(
    curve: &Curve<F>,
    big_span: &[Point<F>],
    h: &Point<F>,
    h_order: u64,
) -> u64 {
    let mut seen: Vec<Point<F>> = Vec::new();
    let mut hk = Point::Infinity;
    for _ in 0..h_order {
        for g in big_span {
            let sum = curve.add_points(g, &hk);
            if !seen.contains(&sum) {
                seen.push(sum);
            }
        }
        hk = curve.add_points(&hk, h);
    }
    seen.len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::FieldTag;
    use crate::tower::TowerTag;
    use crate::QuadElem;

    fn curve(d: i64, a: i64, b: i64) -> Curve<QuadElem> {
        let t = FieldTag::new(d).unwrap();
        Curve::new(t.from_i64(a), t.from_i64(b)).unwrap()
    }

    #[test]
    fn e14_has_z2_z4_over_q() {
        let tp = two_primary_torsion(&curve(-2, 1, 4), 5);
        assert_eq!(tp.group.shape, GroupShape::new(2, 4));
        assert_eq!(tp.elements.len(), 8);
        let c = curve(-2, 1, 4);
        for g in &tp.group.gens {
            assert!(c.contains(g));
        }
        assert_eq!(
            c.order_of_point(&tp.group.gens[1], 16),
            Some(4)
        );
    }

    #[test]
    fn e12_stays_minimal() {
        let tp = two_primary_torsion(&curve(-2, 1, 2), 5);
        assert_eq!(tp.group.shape, GroupShape::new(2, 2));
    }

    #[test]
    fn e729_2304_contains_z4() {
        // 729 and 2304 are both squares in Q(sqrt(-7)).
        let tp = two_primary_torsion(&curve(-7, 729, 2304), 4);
        assert!(tp.group.shape.n % 4 == 0, "shape {}", tp.group.shape);
    }

    #[test]
    fn quartic_growth_over_l() {
        // E(-1,-2) over Q(sqrt(-2)) has 2-part Z/2 x Z/2; over L = K(i) the
        // table says the full group becomes Z/4 x Z/4.
        let k = FieldTag::new(-2).unwrap();
        let base = curve(-2, -1, -2);
        let tp_base = two_primary_torsion(&base, 6);
        assert_eq!(tp_base.group.shape, GroupShape::new(2, 2));
        let l = TowerTag::new(k.from_i64(-1)).unwrap();
        let lifted = Curve::new(l.lift(k.from_i64(-1)), l.lift(k.from_i64(-2))).unwrap();
        let tp = two_primary_torsion(&lifted, 6);
        assert_eq!(tp.group.shape, GroupShape::new(4, 4));
        for g in &tp.group.gens {
            assert!(lifted.contains(g));
        }
    }
}
