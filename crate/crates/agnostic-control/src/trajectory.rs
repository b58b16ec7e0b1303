use std::io::Write;

use crate::history::{first_crossing, Crossing, Direction};

/// A labeled event recorded by a strategy while a path runs: phase entries,
/// level crossings, branch launches. Times are in the root clock.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossingRecord {
    pub label: String,
    pub time: f64,
    /// Level that fired, when the event was a level crossing.
    pub level: Option<f64>,
}

impl CrossingRecord {
    pub fn new(label: impl Into<String>, time: f64, level: Option<f64>) -> Self {
        CrossingRecord {
            label: label.into(),
            time,
            level,
        }
    }
}

/// One realized path of the controlled system with its running cost.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub dt: f64,
    /// Grid times t_k = k * dt, length n+1.
    pub times: Vec<f64>,
    /// Positions at grid times, length n+1; q[0] is the starting position.
    pub q: Vec<f64>,
    /// Controls applied on [t_k, t_{k+1}), length n.
    pub u: Vec<f64>,
    /// Drift the path was simulated under.
    pub a: f64,
    /// Total cost: left-endpoint quadrature of (q^2 + u^2) dt.
    pub cost: f64,
    /// Running cost at each grid time, length n+1, running_cost[0] = 0.
    pub running_cost: Vec<f64>,
    /// Events recorded by the strategy.
    pub stops: Vec<CrossingRecord>,
}

impl Trajectory {
    pub fn first_crossing(&self, level: f64, direction: Direction) -> Option<Crossing> {
        first_crossing(&self.times, &self.q, level, direction)
    }

    /// CSV dump, one row per grid time: `t,q,u,running_cost`. The final row
    /// has no control (the game is over), so its `u` cell is empty.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "t,q,u,running_cost")?;
        for k in 0..self.times.len() {
            if k < self.u.len() {
                writeln!(
                    w,
                    "{},{},{},{}",
                    self.times[k], self.q[k], self.u[k], self.running_cost[k]
                )?;
            } else {
                writeln!(
                    w,
                    "{},{},,{}",
                    self.times[k], self.q[k], self.running_cost[k]
                )?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> Trajectory {
        Trajectory {
            dt: 0.5,
            times: vec![0.0, 0.5, 1.0],
            q: vec![1.0, 2.0, 0.5],
            u: vec![-1.0, 0.0],
            a: 0.0,
            cost: (1.0 + 1.0) * 0.5 + (4.0 + 0.0) * 0.5,
            running_cost: vec![0.0, 1.0, 3.0],
            stops: vec![],
        }
    }

    #[test]
    fn csv_has_header_and_blank_final_control() {
        let mut buf = Vec::new();
        toy().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,q,u,running_cost");
        assert_eq!(lines.len(), 4);
        assert!(
            lines[3].contains(",,"),
            "final row has empty u: {}",
            lines[3]
        );
    }

    #[test]
    fn crossing_queries_work_on_trajectories() {
        let tr = toy();
        let c = tr.first_crossing(1.5, Direction::Up).unwrap();
        assert_eq!(c.index, 1);
        assert!(tr.first_crossing(-1.0, Direction::Down).is_none());
    }
}
