/// Crossing direction for level detection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// First grid time with q >= level.
    Up,
    /// First grid time with q <= level.
    Down,
    /// First grid time with |q| >= level.
    Absolute,
}

/// A detected grid-time crossing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub index: usize,
    pub time: f64,
}

/// Scan for the first crossing, starting from index 1; the initial position
/// does not count (stopping times live in (0, T]). A non-finite level never
/// fires. Crossing times are snapped to the grid, so they carry a positive
/// bias of at most one step.
pub fn first_crossing(
    times: &[f64],
    q: &[f64],
    level: f64,
    direction: Direction,
) -> Option<Crossing> {
    if !level.is_finite() {
        return None;
    }
    debug_assert_eq!(times.len(), q.len());
    for k in 1..q.len() {
        let hit = match direction {
            Direction::Up => q[k] >= level,
            Direction::Down => q[k] <= level,
            Direction::Absolute => q[k].abs() >= level,
        };
        if hit {
            return Some(Crossing {
                index: k,
                time: times[k],
            });
        }
    }
    None
}

/// The observable past handed to a strategy at each grid time: the grid
/// prefix of times and positions, ending at the current point. Strategies
/// see nothing else -- no noise increments and no drift -- which enforces
/// nonanticipation structurally.
#[derive(Clone, Copy, Debug)]
pub struct History<'a> {
    pub times: &'a [f64],
    pub q: &'a [f64],
}

impl<'a> History<'a> {
    pub fn new(times: &'a [f64], q: &'a [f64]) -> Self {
        debug_assert_eq!(times.len(), q.len());
        debug_assert!(!times.is_empty());
        History { times, q }
    }

    /// Current time (last grid point observed).
    pub fn t(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Current position.
    pub fn q_now(&self) -> f64 {
        *self.q.last().unwrap()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn first_crossing(&self, level: f64, direction: Direction) -> Option<Crossing> {
        first_crossing(self.times, self.q, level, direction)
    }
}

/// Growable (time, position) buffer owned by combinators that re-base the
/// clock for a child controller ("forget the past"): the child sees a view
/// of this buffer as its whole world.
#[derive(Clone, Debug, Default)]
pub(crate) struct LocalHistory {
    times: Vec<f64>,
    q: Vec<f64>,
}

impl LocalHistory {
    pub fn new() -> Self {
        LocalHistory {
            times: Vec::new(),
            q: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, q: f64) {
        self.times.push(t);
        self.q.push(q);
    }

    pub fn view(&self) -> History<'_> {
        History::new(&self.times, &self.q)
    }
}
