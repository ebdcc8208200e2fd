use gpm_exact::lp::{solve_lp, LinearProgram, LpOutcome, Sense};
use gpm_exact::rat::{dot, int, Rat};
use gpm_exact::{cone_v_to_h, in_cone, poly_h_to_v, Halfspace};
use proptest::prelude::*;

fn small_vec(dim: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, dim)
}

fn to_rats(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| int(x)).collect()
}

/// Membership in cone(rays) decided independently by an LP over the
/// combination weights.
fn lp_member(rays: &[Vec<Rat>], x: &[Rat]) -> (bool, LinearProgram, LpOutcome) {
    let k = rays.len();
    let mut lp = LinearProgram::feasibility(k);
    for (i, xi) in x.iter().enumerate() {
        lp.add_eq(rays.iter().map(|r| r[i].clone()).collect(), xi.clone());
    }
    for j in 0..k {
        lp.add_ge(gpm_exact::rat::unit(k, j), int(0));
    }
    let out = solve_lp(&lp).unwrap();
    (out.is_optimal(), lp, out)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn facets_agree_with_lp_membership(
        extra in prop::collection::vec(small_vec(3), 0..4),
        weights in prop::collection::vec(0i64..4, 7),
        probe in small_vec(3),
    ) {
        // a pointed full-dimensional cone in the half-space x0 > 0
        let mut rays = vec![vec![1, 1, 0], vec![1, 0, 1], vec![1, -1, -1]];
        for e in &extra {
            rays.push(vec![e[0].abs() + 1, e[1], e[2]]);
        }
        let rays: Vec<Vec<Rat>> = rays.iter().map(|r| to_rats(r)).collect();
        let facets = cone_v_to_h(&rays, 3).unwrap();
        for r in &rays {
            prop_assert!(in_cone(&facets, r));
        }
        // every facet is tight on at least dim-1 = 2 independent rays
        for h in &facets {
            let tight: Vec<Vec<Rat>> = rays.iter().filter(|r| dot(h, r) == int(0)).cloned().collect();
            prop_assert!(gpm_exact::linalg::rank(&tight, 3) == 2);
        }
        let mut combo = vec![int(0); 3];
        for (r, w) in rays.iter().zip(&weights) {
            for i in 0..3 {
                combo[i] += &r[i] * int(*w);
            }
        }
        prop_assert!(in_cone(&facets, &combo));
        let x = to_rats(&probe);
        let (member, lp, out) = lp_member(&rays, &x);
        prop_assert_eq!(member, in_cone(&facets, &x));
        if let LpOutcome::Infeasible { farkas } = out {
            prop_assert!(lp.verify_farkas(&farkas));
        }
    }

    #[test]
    fn optimal_outcomes_satisfy_strong_duality(
        rows in prop::collection::vec((small_vec(3), -4i64..6), 1..6),
        obj in small_vec(3),
        minimize in any::<bool>(),
    ) {
        let sense = if minimize { Sense::Minimize } else { Sense::Maximize };
        let mut lp = LinearProgram::new(3, sense).with_objective(to_rats(&obj));
        for (a, b) in &rows {
            lp.add_le(to_rats(a), int(*b));
        }
        // keep it bounded
        for k in 0..3 {
            let mut u = vec![0; 3];
            u[k] = 1;
            lp.add_le(to_rats(&u), int(5));
            u[k] = -1;
            lp.add_le(to_rats(&u), int(5));
        }
        match solve_lp(&lp).unwrap() {
            LpOutcome::Optimal { value, point, duals } => {
                prop_assert!(lp.is_feasible_point(&point));
                prop_assert_eq!(&dot(&lp.objective, &point), &value);
                prop_assert!(lp.verify_duals(&value, &duals));
            }
            LpOutcome::Infeasible { farkas } => prop_assert!(lp.verify_farkas(&farkas)),
            LpOutcome::Unbounded { .. } => prop_assert!(false, "bounded program reported unbounded"),
        }
    }

    #[test]
    fn solver_is_deterministic(rows in prop::collection::vec((small_vec(2), -2i64..4), 1..5)) {
        let mut lp = LinearProgram::new(2, Sense::Maximize).with_objective(to_rats(&[1, 1]));
        for (a, b) in &rows {
            lp.add_le(to_rats(a), int(*b));
        }
        lp.add_le(to_rats(&[1, 0]), int(3));
        lp.add_le(to_rats(&[0, 1]), int(3));
        prop_assert_eq!(solve_lp(&lp).unwrap(), solve_lp(&lp).unwrap());
    }

    #[test]
    fn polytope_vertices_are_feasible_and_extreme(
        rows in prop::collection::vec((small_vec(2), -3i64..3), 0..5),
    ) {
        let mut hs: Vec<Halfspace> = rows
            .iter()
            .map(|(a, b)| Halfspace::new(to_rats(a), int(*b)))
            .collect();
        for (a, b) in [([1, 0], -2), ([-1, 0], -2), ([0, 1], -2), ([0, -1], -2)] {
            hs.push(Halfspace::new(to_rats(&a), int(b)));
        }
        let verts = poly_h_to_v(&hs, 2).unwrap();
        for v in &verts {
            prop_assert!(hs.iter().all(|h| h.contains(v)));
            let tight: Vec<Vec<Rat>> = hs
                .iter()
                .filter(|h| dot(&h.normal, v) == h.offset)
                .map(|h| h.normal.clone())
                .collect();
            prop_assert_eq!(gpm_exact::linalg::rank(&tight, 2), 2);
        }
    }
}
