use std::collections::BTreeSet;

use hyperfocus_core::arcs::{self, classify_focus, hyperfocused_arcs_through_frame, translation_arc, FocusKind};
use hyperfocus_core::canon::canonical_digest;
use hyperfocus_core::{plane, Arc, Felt, FieldCtx, ProjLine, ProjPoint, TranslationGroup};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn gf32() -> FieldCtx {
    FieldCtx::new(5, 0x25).unwrap()
}

fn field_axioms(s: u32) {
    let ctx = FieldCtx::with_default_modulus(s).unwrap();
    let q = ctx.q();
    let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig::with_cases(10_000));
    runner
        .run(&(0..q, 0..q, 0..q), |(a, b, c)| {
            let (a, b, c) = (Felt(a), Felt(b), Felt(c));
            prop_assert_eq!(ctx.add(a, b), ctx.add(b, a));
            prop_assert_eq!(ctx.mul(a, b), ctx.mul(b, a));
            prop_assert_eq!(ctx.mul(ctx.mul(a, b), c), ctx.mul(a, ctx.mul(b, c)));
            prop_assert_eq!(ctx.add(ctx.add(a, b), c), ctx.add(a, ctx.add(b, c)));
            prop_assert_eq!(ctx.mul(a, ctx.add(b, c)), ctx.add(ctx.mul(a, b), ctx.mul(a, c)));
            prop_assert_eq!(ctx.add(a, a), Felt::ZERO);
            prop_assert_eq!(ctx.mul(a, Felt::ONE), a);
            if !a.is_zero() {
                prop_assert_eq!(ctx.mul(a, ctx.inv(a).unwrap()), Felt::ONE);
                prop_assert_eq!(ctx.div(ctx.mul(b, a), a).unwrap(), b);
            }
            prop_assert_eq!(ctx.square(ctx.add(a, b)), ctx.add(ctx.square(a), ctx.square(b)));
            Ok(())
        })
        .unwrap();
}

#[test]
fn field_axioms_gf4() {
    field_axioms(2);
}

#[test]
fn field_axioms_gf8() {
    field_axioms(3);
}

#[test]
fn field_axioms_gf16() {
    field_axioms(4);
}

#[test]
fn field_axioms_gf32() {
    field_axioms(5);
}

fn random_point(ctx: &FieldCtx, rng: &mut StdRng) -> ProjPoint {
    loop {
        let v = [
            rng.gen_range(0..ctx.q()),
            rng.gen_range(0..ctx.q()),
            rng.gen_range(0..ctx.q()),
        ];
        if let Ok(p) = ProjPoint::new(ctx, v) {
            return p;
        }
    }
}

#[test]
fn random_four_arcs_are_hyperfocused_on_their_diagonal_line() {
    let ctx = gf32();
    let mut rng = StdRng::seed_from_u64(0x4a5c);
    let mut done = 0;
    while done < 1000 {
        let pts: Vec<ProjPoint> = (0..4).map(|_| random_point(&ctx, &mut rng)).collect();
        let Ok(arc) = Arc::new(&ctx, pts.clone()) else { continue };
        let side = |i: usize, j: usize| plane::line_through(&ctx, &pts[i], &pts[j]).unwrap();
        let d1 = plane::meet(&ctx, &side(0, 1), &side(2, 3)).unwrap();
        let d2 = plane::meet(&ctx, &side(0, 2), &side(1, 3)).unwrap();
        let d3 = plane::meet(&ctx, &side(0, 3), &side(1, 2)).unwrap();
        let diagonal = plane::line_through(&ctx, &d1, &d2).unwrap();
        assert!(plane::incident(&ctx, &d3, &diagonal));
        assert!(arc.is_exterior(&ctx, &diagonal));
        let v = classify_focus(&ctx, &arc, &diagonal).unwrap();
        assert_eq!((v.kind, v.focus_count), (FocusKind::Hyperfocused, 3));
        done += 1;
    }
}

#[test]
fn translation_hyperoval_on_random_exterior_lines() {
    let ctx = gf32();
    let hyperoval = arcs::translation_hyperoval(&ctx, 1).unwrap();
    assert_eq!(hyperoval.k(), 34);
    let mut rng = StdRng::seed_from_u64(7);
    let mut seen = BTreeSet::new();
    while seen.len() < 50 {
        let v = [rng.gen_range(0..32), rng.gen_range(0..32), rng.gen_range(0..32)];
        let Ok(l) = ProjLine::new(&ctx, v) else { continue };
        if !hyperoval.is_exterior(&ctx, &l) || !seen.insert(l.to_array()) {
            continue;
        }
        let v = classify_focus(&ctx, &hyperoval, &l).unwrap();
        assert_eq!(v.focus_count, 33);
        assert_eq!(v.kind, FocusKind::Hyperfocused);
    }
}

#[test]
fn random_translation_arcs_are_hyperfocused_on_the_line_at_infinity() {
    let ctx = gf32();
    let mut rng = StdRng::seed_from_u64(11);
    let z = ProjLine::infinity();
    let mut sizes = BTreeSet::new();
    let mut done = 0;
    while done < 10 {
        let rank = if done % 2 == 0 { 2 } else { 3 };
        let gens: Vec<(Felt, Felt)> = (0..rank)
            .map(|_| (Felt(rng.gen_range(0..32)), Felt(rng.gen_range(0..32))))
            .collect();
        let group = TranslationGroup::generate(&gens);
        if group.len() != 1 << rank {
            continue;
        }
        let p = ProjPoint::affine(Felt(rng.gen_range(0..32)), Felt(rng.gen_range(0..32)));
        let Ok(arc) = translation_arc(&ctx, &group, &p) else {
            continue;
        };
        let v = classify_focus(&ctx, &arc, &z).unwrap();
        assert_eq!(v.kind, FocusKind::Hyperfocused);
        sizes.insert(arc.k());
        done += 1;
    }
    assert_eq!(sizes, BTreeSet::from([4, 8]));
}

// Arcs of size at most 4 are trivially hyperfocused, and so is a hyperoval
// minus the two points it shares with the focus line (size q).
fn bichara_korchmaros(s: u32) {
    let ctx = FieldCtx::with_default_modulus(s).unwrap();
    let q = ctx.q() as usize;
    let z = ProjLine::infinity();
    let found = hyperfocused_arcs_through_frame(&ctx);
    assert!(found.iter().any(|a| a.k() == q + 2));
    for a in &found {
        if a.k() == q {
            let on_z: Vec<ProjPoint> = z
                .points(&ctx)
                .filter(|p| !arcs::focus_set(&ctx, a, &z).unwrap().contains(p))
                .collect();
            assert_eq!(on_z.len(), 2);
            let mut pts = a.points().to_vec();
            pts.extend(on_z);
            assert!(
                Arc::new(&ctx, pts).is_ok(),
                "a {q}-arc that is not a hyperoval minus two points"
            );
            continue;
        }
        assert!(
            a.k() <= 4 || a.k() <= q / 2 || a.k() == q + 2,
            "{}-arc at q = {q}",
            a.k()
        );
    }
}

#[test]
fn bichara_korchmaros_at_q4_and_q8() {
    bichara_korchmaros(2);
    bichara_korchmaros(3);
}

// Any nested pair with at least three points in the smaller arc can be moved
// so that the frame lies in it, so pairs through the frame cover every case;
// a 2-arc inside a larger even arc satisfies the bound trivially.
fn nested_pairs(s: u32) -> usize {
    let ctx = FieldCtx::with_default_modulus(s).unwrap();
    let found = hyperfocused_arcs_through_frame(&ctx);
    let sets: Vec<BTreeSet<u32>> = found.iter().map(|a| a.indices(&ctx).into_iter().collect()).collect();
    let mut pairs = 0;
    for small in &sets {
        for big in &sets {
            if small.len() < big.len() && small.is_subset(big) {
                assert!(big.len() >= 2 * small.len(), "{} inside {}", small.len(), big.len());
                pairs += 1;
            }
        }
    }
    pairs
}

#[test]
fn nested_hyperfocused_arcs_at_least_double() {
    // In PG(2,4) a 4-arc inside a hyperfocused 6-arc would break the bound;
    // there are none.
    assert_eq!(nested_pairs(2), 0);
    assert!(nested_pairs(3) > 0);
}

#[test]
fn secant_deltas() {
    let ctx = gf32();
    let affine: Vec<ProjPoint> = arcs::translation_hyperoval(&ctx, 1)
        .unwrap()
        .points()
        .iter()
        .filter(|p| p.is_affine())
        .copied()
        .collect();
    let secants = |n: usize| arcs::secants(&ctx, &Arc::new(&ctx, affine[..n].to_vec()).unwrap()).len();
    assert_eq!(secants(12) - secants(8), 38);
    assert_eq!(secants(14) - secants(8), 63);
}

#[test]
fn conic_translation_four_arcs_share_one_canonical_form() {
    let ctx = gf32();
    let z = ProjLine::infinity();
    let mut planes = BTreeSet::new();
    for u in 1..32u32 {
        for v in u + 1..32 {
            let mut span = [0, u, v, u ^ v];
            span.sort_unstable();
            planes.insert(span);
        }
    }
    assert_eq!(planes.len(), 155);
    let digests: BTreeSet<String> = planes
        .iter()
        .map(|span| {
            let pts = span
                .iter()
                .map(|&t| ProjPoint::affine(Felt(t), ctx.square(Felt(t))))
                .collect();
            let arc = Arc::new(&ctx, pts).unwrap();
            assert_eq!(classify_focus(&ctx, &arc, &z).unwrap().kind, FocusKind::Hyperfocused);
            canonical_digest(&ctx, &arc, &z).unwrap()
        })
        .collect();
    assert_eq!(digests.len(), 1);
}
