use super::{validate_route, Route, RouteSet, RouteSetError, VrptwInstance, DEPOT};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RouteGenConfig {
    /// Maximum number of customers on one route.
    pub max_stops: usize,
    /// Stop after this many routes; `None` enumerates everything reachable.
    pub max_routes: Option<usize>,
}

impl RouteGenConfig {
    pub fn new(max_stops: usize, max_routes: Option<usize>) -> Self {
        Self {
            max_stops,
            max_routes,
        }
    }
}

struct Search<'a> {
    instance: &'a VrptwInstance,
    config: RouteGenConfig,
    path: Vec<usize>,
    visited: Vec<bool>,
    out: Vec<Route>,
}

impl Search<'_> {
    fn full(&self) -> bool {
        self.config
            .max_routes
            .is_some_and(|cap| self.out.len() >= cap)
    }

    fn visit(&mut self, node: usize, arrival: f64) {
        if node != DEPOT && self.instance.arc(node, DEPOT).is_some() {
            self.path.push(DEPOT);
            let route = validate_route(self.instance, &self.path)
                .expect("search only extends along feasible segments");
            self.path.pop();
            self.out.push(route);
            if self.full() {
                return;
            }
        }
        if self.path.len() > self.config.max_stops {
            return;
        }

        let mut next: Vec<(f64, usize, f64)> = self
            .instance
            .outgoing(node)
            .filter(|arc| arc.to != DEPOT && !self.visited[arc.to])
            .filter_map(|arc| {
                let target = &self.instance.nodes()[arc.to];
                let t = target.window_open.max(arrival + arc.travel_time);
                (t <= target.window_close).then_some((arc.cost, arc.to, t))
            })
            .collect();
        next.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        for (_, to, t) in next {
            self.path.push(to);
            self.visited[to] = true;
            self.visit(to, t);
            self.visited[to] = false;
            self.path.pop();
            if self.full() {
                return;
            }
        }
    }
}

/// Enumerates feasible routes depth-first from the depot.
///
/// Outgoing arcs are tried in ascending cost order (ties by destination id);
/// partial routes that miss a window or exceed `max_stops` customers are
/// pruned, and a route is emitted every time the current customer can return
/// to the depot. The emission order depends only on the instance.
pub fn generate_routes(
    instance: &VrptwInstance,
    config: RouteGenConfig,
) -> Result<RouteSet, RouteSetError> {
    let mut search = Search {
        instance,
        config,
        path: vec![DEPOT],
        visited: vec![false; instance.nodes().len()],
        out: Vec::new(),
    };
    if config.max_stops >= 1 && config.max_routes != Some(0) {
        search.visit(DEPOT, 0.0);
    }
    if search.out.is_empty() {
        return Err(RouteSetError::NoFeasibleRoutes);
    }
    Ok(RouteSet::from_validated(instance.clone(), search.out))
}
