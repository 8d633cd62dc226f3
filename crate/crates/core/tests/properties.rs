use std::f64::consts::TAU;

use proptest::prelude::*;

use c2game::dynamics::{order_parameter, FrustrationAssignment, ModelParams, SimState, Swarmalator};
use c2game::game::{solve_zero_sum, utilities, ActionSet, TurnScore};
use c2game::harness::{density_grid, score_timeseries, Window};
use c2game::integrator::{accumulate_occupancy, Trajectory};
use c2game::network::{build_force_network, Echelon, ForceLayout, LinkClass, Population};

fn points(n: usize, spread: f64) -> impl Strategy<Value = Vec<[f64; 2]>> {
    prop::collection::vec((-spread..spread, -spread..spread).prop_map(|(x, y)| [x, y]), n)
}

fn matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
    (1usize..6, 1usize..6).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-20.0..20.0f64, c), r))
}

fn trajectory(pops: &[Population], steps: Vec<(f64, Vec<[f64; 2]>)>) -> Trajectory {
    let mut tr = Trajectory::new(pops.to_vec());
    let mut t = 0.0;
    for (dt, p) in steps {
        tr.push(SimState {
            t,
            phases: vec![0.0; pops.len()],
            positions: p,
        });
        t += dt;
    }
    tr
}

const POPS: [Population; 4] = [Population::Blue, Population::Red, Population::Blue, Population::Red];

fn steps() -> impl Strategy<Value = Vec<(f64, Vec<[f64; 2]>)>> {
    prop::collection::vec((0.001..0.5f64, points(4, 2.0)), 2..40)
}

proptest! {
    #[test]
    fn order_parameter_is_bounded_and_shift_invariant(
        phases in prop::collection::vec(-10.0..10.0f64, 1..30),
        shift in -10.0..10.0f64,
    ) {
        let all: Vec<usize> = (0..phases.len()).collect();
        let r = order_parameter(&phases, &all).unwrap();
        prop_assert!((0.0..=1.0).contains(&r));
        let moved: Vec<f64> = phases.iter().map(|p| p + shift).collect();
        prop_assert!((order_parameter(&moved, &all).unwrap() - r).abs() < 1e-12);
    }

    #[test]
    fn network_is_symmetric_with_consistent_degrees(
        hq in 1usize..12,
        swarm in 1usize..8,
        seed in any::<u64>(),
    ) {
        let net = build_force_network(&ForceLayout::mirrored(hq, swarm), seed).unwrap();
        prop_assert_eq!(net.len(), 2 * (hq + swarm));
        for i in 0..net.len() {
            prop_assert!(net.weight(i, i) == 0.0);
            let mut degree = 0;
            for j in 0..net.len() {
                prop_assert_eq!(net.weight(i, j), net.weight(j, i));
                prop_assert_eq!(net.link_class(i, j).unwrap(), net.link_class(j, i).unwrap());
                if net.weight(i, j) != 0.0 {
                    degree += 1;
                }
            }
            prop_assert_eq!(net.degree(i), degree);
            prop_assert!(degree > 0);
        }
        prop_assert_eq!(net.count_class(LinkClass::SwarmAdversarial), swarm * swarm);
        for p in Population::BOTH {
            let c = net.controller(p).unwrap();
            for s in net.members(p, Echelon::Swarm) {
                prop_assert_eq!(net.link_class(c, s).unwrap(), Some(match p { Population::Blue => LinkClass::ControllerToSwarmBlue, Population::Red => LinkClass::ControllerToSwarmRed }));
            }
        }
    }

    #[test]
    fn occupancy_is_additive_and_monotone_in_radius(
        steps in steps(),
        split in any::<prop::sample::Index>(),
        r1 in 0.1..1.5f64,
        extra in 0.0..1.0f64,
    ) {
        let tr = trajectory(&POPS, steps);
        let k = split.index(tr.len());
        let mut head = Trajectory::new(POPS.to_vec());
        let mut tail = Trajectory::new(POPS.to_vec());
        for (n, s) in tr.states.iter().enumerate() {
            if n <= k {
                head.push(s.clone());
            }
            if n >= k {
                tail.push(s.clone());
            }
        }
        for p in Population::BOTH {
            let whole = accumulate_occupancy(&tr, p, r1).unwrap();
            let parts = accumulate_occupancy(&head, p, r1).unwrap() + accumulate_occupancy(&tail, p, r1).unwrap();
            prop_assert!((whole - parts).abs() < 1e-12);
            prop_assert!(accumulate_occupancy(&tr, p, r1 + extra).unwrap() >= whole);
        }
    }

    #[test]
    fn score_series_never_decreases(steps in steps()) {
        let tr = trajectory(&POPS, steps);
        let s = score_timeseries(&tr, 1.0, &[]);
        prop_assert!(s.blue.windows(2).all(|w| w[1] >= w[0]));
        prop_assert!(s.red.windows(2).all(|w| w[1] >= w[0]));
        let (b, r) = s.final_scores().unwrap();
        prop_assert_eq!(b, accumulate_occupancy(&tr, Population::Blue, 1.0).unwrap());
        prop_assert_eq!(r, accumulate_occupancy(&tr, Population::Red, 1.0).unwrap());
    }

    #[test]
    fn density_has_unit_mass(steps in steps(), resolution in 1usize..50) {
        let tr = trajectory(&POPS, steps);
        let g = density_grid(&[&tr], Population::Blue, Window::ALL, 2.0, resolution).unwrap();
        prop_assert!((g.mass() - 1.0).abs() < 1e-12);
        prop_assert_eq!(g.samples + g.outside, 2 * tr.len());
    }

    #[test]
    fn utilities_are_exactly_zero_sum(scores in prop::collection::vec((0.0..100.0f64, 0.0..100.0f64), 1..6)) {
        let turns: Vec<TurnScore> = scores.iter().map(|&(blue, red)| TurnScore { blue, red }).collect();
        let (ub, ur) = utilities(&turns);
        prop_assert_eq!(ub + ur, 0.0);
    }

    #[test]
    fn strategy_count_is_power_of_action_count(n in 1usize..5, turns in 1usize..4) {
        let actions = ActionSet::new((0..n).map(|k| k as f64 * 0.5).collect()).unwrap();
        let all = actions.strategies(turns);
        prop_assert_eq!(all.len(), n.pow(turns as u32));
        let mut labels: Vec<String> = all.iter().map(|s| s.label()).collect();
        labels.dedup();
        prop_assert_eq!(labels.len(), all.len());
    }

    #[test]
    fn maximin_is_antisymmetric(a in matrix()) {
        let neg: Vec<Vec<f64>> = (0..a[0].len()).map(|c| a.iter().map(|r| -r[c]).collect()).collect();
        let v = solve_zero_sum(&a).unwrap().value;
        let w = solve_zero_sum(&neg).unwrap().value;
        prop_assert!((v + w).abs() < 1e-9, "{} vs {}", v, w);
    }

    #[test]
    fn maximin_value_lies_between_pure_bounds(a in matrix()) {
        let sol = solve_zero_sum(&a).unwrap();
        let lower = a.iter().map(|r| r.iter().copied().fold(f64::INFINITY, f64::min)).fold(f64::NEG_INFINITY, f64::max);
        let upper = (0..a[0].len())
            .map(|c| a.iter().map(|r| r[c]).fold(f64::NEG_INFINITY, f64::max))
            .fold(f64::INFINITY, f64::min);
        prop_assert!(sol.value >= lower - 1e-9 && sol.value <= upper + 1e-9);
        prop_assert!((sol.blue.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert!((sol.red.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn pair_forces_are_translation_equivariant(
        pos in points(8, 3.0),
        phases in prop::collection::vec(0.0..TAU, 18),
        shift in (-5.0..5.0f64, -5.0..5.0f64),
    ) {
        // No phase-dependent term, so nothing is anchored to the hill.
        let params = ModelParams { spatial_coupling: 0.0, ..ModelParams::default() };
        let net = build_force_network(&ForceLayout::mirrored(5, 4), 1).unwrap();
        let model = Swarmalator::new(&net, &params).unwrap();
        let f = FrustrationAssignment::new(1.0, 0.5);
        let a = SimState { t: 0.0, phases: phases.clone(), positions: pos.clone() };
        let b = SimState {
            t: 0.0,
            phases,
            positions: pos.iter().map(|p| [p[0] + shift.0, p[1] + shift.1]).collect(),
        };
        for &i in net.swarm_agents() {
            let (fa, fb) = (model.attraction_force(i, &a, f).unwrap(), model.attraction_force(i, &b, f).unwrap());
            let (ra, rb) = (model.repulsion_force(i, &a).unwrap(), model.repulsion_force(i, &b).unwrap());
            for c in 0..2 {
                prop_assert!((fa[c] - fb[c]).abs() < 1e-9);
                prop_assert!((ra[c] - rb[c]).abs() < 1e-9);
            }
        }
    }
}
