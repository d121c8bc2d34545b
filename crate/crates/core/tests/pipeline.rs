use qvrp_core::encodings::Scheme;
use qvrp_core::optimize::{run_experiment, RunConfig};
use qvrp_core::qubo::io::{read_qubo, write_qubo};
use qvrp_core::qubo::{all_costs, brute_force, build_qubo, check_feasibility};
use qvrp_core::vrptw::io::{route_set_from_json, route_set_to_json};
use qvrp_core::vrptw::synth::{random_instance, SynthConfig};
use qvrp_core::vrptw::{generate_routes, RouteGenConfig};

#[test]
fn files_round_trip_to_the_same_problem() {
    let inst = random_instance(&SynthConfig::new(4), 3);
    let set = generate_routes(&inst, RouteGenConfig::new(2, Some(9))).unwrap();
    let reloaded = route_set_from_json(&route_set_to_json(&set)).unwrap();
    assert_eq!(reloaded, set);

    let q = build_qubo(&set, None, None).unwrap();
    let q2 = read_qubo(&write_qubo(&q)).unwrap();
    assert_eq!(all_costs(&q, 20).unwrap(), all_costs(&q2, 20).unwrap());
    let x = brute_force(&q).unwrap().x_min;
    assert_eq!(
        check_feasibility(&q, &x).unwrap(),
        check_feasibility(&q2, &x).unwrap()
    );
}

#[test]
fn experiment_samples_are_scored_against_the_route_set() {
    let inst = random_instance(&SynthConfig::new(3), 0);
    let set = generate_routes(&inst, RouteGenConfig::new(3, None)).unwrap();
    let q = build_qubo(&set, None, None).unwrap();
    let bounds = brute_force(&q).unwrap();
    let q = q.with_bounds(bounds.clone().into());
    let cfg = RunConfig {
        max_iterations: 60,
        n_starts: 4,
        ..RunConfig::new(Scheme::Minimal)
    };
    let result = run_experiment(&q, &cfg).unwrap();
    assert_eq!(result.solutions().count(), 40);
    for s in result.solutions() {
        let c = s.normalized_cost.unwrap();
        assert!((0.0..=1.0).contains(&c));
        let routes = s.bits.ones().map(|k| &set.routes()[k]);
        let mut visits = vec![0u32; inst.customer_count()];
        for r in routes {
            for &node in &r.coverage {
                visits[node - 1] += 1;
            }
        }
        assert_eq!(s.visit_counts, visits);
        assert_eq!(s.feasible, visits.iter().all(|&v| v == 1));
    }
    assert!(result.best_solution().unwrap().cost >= bounds.c_min);
}
