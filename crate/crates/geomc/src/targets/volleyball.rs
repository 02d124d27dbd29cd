//! Posterior for the partially-observed win/loss model.
//!
//! Each match pits two disjoint teams against each other; the probability
//! that team `W` beats team `L` is `sum_{t in W} p_t / sum_{t in W u L} p_t`
//! with `p` a point of the simplex. The prior is Dirichlet(alpha 1). The
//! posterior is available in both parameterizations: on the simplex itself
//! (for the random-walk and reflective-HMC samplers) and on the sphere via
//! `theta_i = x_i^2` (for the spherical samplers).

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::manifolds::{Manifold, Point};
use crate::rng::RngStream;

use super::{DirichletSimplex, DirichletSphere, Target};

/// One match: the 1-based indices of the winning and losing players.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchRecord {
    winners: Vec<usize>,
    losers: Vec<usize>,
}

impl MatchRecord {
    /// Validates that both sides are non-empty, disjoint and 1-based.
    pub fn new(mut winners: Vec<usize>, mut losers: Vec<usize>) -> Result<Self> {
        winners.sort_unstable();
        winners.dedup();
        losers.sort_unstable();
        losers.dedup();
        if winners.is_empty() || losers.is_empty() {
            return Err(Error::Domain("a match needs players on both sides".into()));
        }
        if winners.contains(&0) || losers.contains(&0) {
            return Err(Error::Domain("player indices are 1-based".into()));
        }
        if winners.iter().any(|w| losers.binary_search(w).is_ok()) {
            return Err(Error::Domain(
                "winning and losing teams must be disjoint".into(),
            ));
        }
        Ok(MatchRecord { winners, losers })
    }

    pub fn winners(&self) -> &[usize] {
        &self.winners
    }

    pub fn losers(&self) -> &[usize] {
        &self.losers
    }

    /// Largest player index appearing in the match.
    pub fn max_index(&self) -> usize {
        *self
            .winners
            .iter()
            .chain(self.losers.iter())
            .max()
            .expect("teams are non-empty")
    }
}

fn check_matches(matches: &[MatchRecord], players: usize) -> Result<()> {
    for m in matches {
        if m.max_index() > players {
            return Err(Error::Dimension(format!(
                "match references player {} but the model has {players}",
                m.max_index()
            )));
        }
    }
    Ok(())
}

// Likelihood term shared by both parameterizations: theta(i) is the strength
// of player i under the current coordinates.
fn match_log_likelihood(matches: &[MatchRecord], theta: impl Fn(usize) -> f64) -> f64 {
    let mut total = 0.0;
    for m in matches {
        let win: f64 = m.winners.iter().map(|&t| theta(t - 1)).sum();
        let all: f64 = win + m.losers.iter().map(|&t| theta(t - 1)).sum::<f64>();
        if win <= 0.0 || all <= 0.0 {
            return f64::NEG_INFINITY;
        }
        total += win.ln() - all.ln();
    }
    total
}

/// Win/loss posterior on the sphere (`theta_i = x_i^2`).
#[derive(Clone, Debug)]
pub struct VolleyballSphere {
    matches: Vec<MatchRecord>,
    prior: DirichletSphere,
}

impl VolleyballSphere {
    pub fn new(players: usize, matches: Vec<MatchRecord>, alpha: f64) -> Result<Self> {
        check_matches(&matches, players)?;
        let prior = DirichletSphere::new(DVector::from_element(players, alpha))?;
        Ok(VolleyballSphere { matches, prior })
    }

    pub fn matches(&self) -> &[MatchRecord] {
        &self.matches
    }
}

impl Target for VolleyballSphere {
    fn manifold(&self) -> &Manifold {
        self.prior.manifold()
    }

    fn log_density(&self, x: &Point) -> f64 {
        let prior = self.prior.log_density(x);
        if prior == f64::NEG_INFINITY {
            return prior;
        }
        prior + match_log_likelihood(&self.matches, |i| x.0[i] * x.0[i])
    }

    fn gradient(&self, x: &Point) -> Result<DVector<f64>> {
        let mut grad = self.prior.gradient(x)?;
        for m in &self.matches {
            let win: f64 = m.winners.iter().map(|&t| x.0[t - 1] * x.0[t - 1]).sum();
            let all: f64 = win
                + m.losers
                    .iter()
                    .map(|&t| x.0[t - 1] * x.0[t - 1])
                    .sum::<f64>();
            if win <= 0.0 || all <= 0.0 {
                return Err(Error::Domain(
                    "win/loss gradient is singular where a team sum vanishes".into(),
                ));
            }
            for &t in &m.winners {
                grad[t - 1] += 2.0 * x.0[t - 1] / win - 2.0 * x.0[t - 1] / all;
            }
            for &t in &m.losers {
                grad[t - 1] -= 2.0 * x.0[t - 1] / all;
            }
        }
        Ok(grad)
    }
}

/// Win/loss posterior directly on the simplex.
#[derive(Clone, Debug)]
pub struct VolleyballSimplex {
    matches: Vec<MatchRecord>,
    prior: DirichletSimplex,
}

impl VolleyballSimplex {
    pub fn new(players: usize, matches: Vec<MatchRecord>, alpha: f64) -> Result<Self> {
        check_matches(&matches, players)?;
        let prior = DirichletSimplex::new(DVector::from_element(players, alpha))?;
        Ok(VolleyballSimplex { matches, prior })
    }
}

impl Target for VolleyballSimplex {
    fn manifold(&self) -> &Manifold {
        self.prior.manifold()
    }

    fn log_density(&self, theta: &Point) -> f64 {
        let prior = self.prior.log_density(theta);
        if prior == f64::NEG_INFINITY {
            return prior;
        }
        prior + match_log_likelihood(&self.matches, |i| theta.0[i])
    }

    fn gradient(&self, theta: &Point) -> Result<DVector<f64>> {
        let mut grad = self.prior.gradient(theta)?;
        for m in &self.matches {
            let win: f64 = m.winners.iter().map(|&t| theta.0[t - 1]).sum();
            let all: f64 = win + m.losers.iter().map(|&t| theta.0[t - 1]).sum::<f64>();
            if win <= 0.0 || all <= 0.0 {
                return Err(Error::Domain(
                    "win/loss gradient is singular where a team sum vanishes".into(),
                ));
            }
            for &t in &m.winners {
                grad[t - 1] += 1.0 / win - 1.0 / all;
            }
            for &t in &m.losers {
                grad[t - 1] -= 1.0 / all;
            }
        }
        Ok(grad)
    }
}

/// Draw synthetic matches from the model under known strengths `p_true`.
///
/// Teams are disjoint random subsets (1 to 3 players a side) and the winner
/// is drawn from the model's win probability, so long-run posterior means
/// under a flat prior should rank players like `p_true` does.
pub fn generate_matches(
    p_true: &DVector<f64>,
    n_matches: usize,
    rng: &mut RngStream,
) -> Result<Vec<MatchRecord>> {
    let d = p_true.len();
    if d < 4 {
        return Err(Error::Dimension(
            "need at least 4 players to form two teams".into(),
        ));
    }
    if p_true.iter().any(|&p| !(p > 0.0)) {
        return Err(Error::Domain("true strengths must be positive".into()));
    }
    let mut out = Vec::with_capacity(n_matches);
    for _ in 0..n_matches {
        // Random disjoint teams via a partial shuffle.
        let mut ids: Vec<usize> = (1..=d).collect();
        for i in 0..ids.len() {
            let j = i + rng.uniform_index(ids.len() - i);
            ids.swap(i, j);
        }
        let s1 = 1 + rng.uniform_index(3.min(d / 2));
        let s2 = 1 + rng.uniform_index(3.min(d / 2));
        let team1: Vec<usize> = ids[..s1].to_vec();
        let team2: Vec<usize> = ids[s1..s1 + s2].to_vec();

        let sum1: f64 = team1.iter().map(|&t| p_true[t - 1]).sum();
        let sum2: f64 = team2.iter().map(|&t| p_true[t - 1]).sum();
        let p_win = sum1 / (sum1 + sum2);
        let (winners, losers) = if rng.uniform() < p_win {
            (team1, team2)
        } else {
            (team2, team1)
        };
        out.push(MatchRecord::new(winners, losers)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::targets::assert_gradient_matches_fd;

    fn unit_x(values: &[f64]) -> Point {
        let v = DVector::from_column_slice(values);
        Point(&v / v.norm())
    }

    #[test]
    fn match_record_validation() {
        assert!(MatchRecord::new(vec![1, 2], vec![3]).is_ok());
        assert!(MatchRecord::new(vec![1], vec![1]).is_err());
        assert!(MatchRecord::new(vec![], vec![1]).is_err());
        assert!(MatchRecord::new(vec![0], vec![1]).is_err());
    }

    #[test]
    fn empty_match_list_reduces_to_the_prior() {
        let t = VolleyballSphere::new(5, vec![], 0.5).unwrap();
        let prior = DirichletSphere::new(DVector::from_element(5, 0.5)).unwrap();
        let mut rng = RngStream::new(1);
        for _ in 0..5 {
            let z = rng.normal_vector(5);
            let x = Point(&z / z.norm());
            assert_eq!(t.log_density(&x), prior.log_density(&x));
        }
    }

    #[test]
    fn single_match_likelihood_value() {
        // theta_1 = 0.36, theta_2 = 0.04: likelihood log(0.36/0.40).
        let matches = vec![MatchRecord::new(vec![1], vec![2]).unwrap()];
        let t = VolleyballSphere::new(3, matches, 0.5).unwrap();
        let x = Point(DVector::from_vec(vec![0.6, 0.2, (1.0f64 - 0.4).sqrt()]));
        // Prior is uniform at alpha = 1/2, so the value is the likelihood.
        assert!((t.log_density(&x) - (0.36f64 / 0.40).ln()).abs() < 1e-12);
    }

    #[test]
    fn density_is_even_in_every_coordinate() {
        let mut rng = RngStream::new(2);
        let matches = generate_matches(&DVector::from_element(6, 1.0 / 6.0), 10, &mut rng).unwrap();
        let t = VolleyballSphere::new(6, matches, 1.0).unwrap();
        let z = rng.normal_vector(6);
        let x = Point(&z / z.norm());
        let mut flipped = x.clone();
        flipped.0[2] = -flipped.0[2];
        flipped.0[5] = -flipped.0[5];
        assert!((t.log_density(&x) - t.log_density(&flipped)).abs() < 1e-12);
    }

    #[test]
    fn gradients_match_finite_differences_in_both_parameterizations() {
        let mut rng = RngStream::new(3);
        let p = DVector::from_vec(vec![0.3, 0.2, 0.15, 0.1, 0.1, 0.05, 0.04, 0.03, 0.03]);
        let matches = generate_matches(&p, 20, &mut rng).unwrap();
        let sphere = VolleyballSphere::new(9, matches.clone(), 1.5).unwrap();
        let simplex = VolleyballSimplex::new(9, matches, 1.5).unwrap();
        for _ in 0..10 {
            let z = rng.normal_vector(9);
            let x = Point(&z / z.norm());
            if x.0.iter().any(|c| c.abs() < 0.05) {
                continue;
            }
            assert_gradient_matches_fd(&sphere, &x, 1e-5);

            let g: Vec<f64> = (0..9).map(|_| -rng.uniform().ln().max(1e-9)).collect();
            let s: f64 = g.iter().sum();
            let theta = Point(DVector::from_vec(g.iter().map(|v| v / s).collect()));
            assert_gradient_matches_fd(&simplex, &theta, 1e-5);
        }
    }

    #[test]
    fn generator_respects_team_constraints() {
        let mut rng = RngStream::new(4);
        let p = DVector::from_element(9, 1.0 / 9.0);
        let matches = generate_matches(&p, 50, &mut rng).unwrap();
        assert_eq!(matches.len(), 50);
        for m in &matches {
            assert!(m.max_index() <= 9);
            assert!(!m.winners().is_empty() && !m.losers().is_empty());
        }

        let t = unit_x(&[1.0; 9]);
        let posterior = VolleyballSphere::new(9, matches, 0.5).unwrap();
        assert!(posterior.log_density(&t).is_finite());
    }
}
