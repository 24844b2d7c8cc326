//! Brute-force search over two-message sender strategies on a rational grid.
//!
//! Type `k` sends the first message with probability `s_k / R`. A third
//! message exists only to meet the message-count requirement and is never
//! sent. For each grid point the posteriors are formed, and one joint LP
//! looks for optimal receiver proposals that make the split incentive
//! compatible. Failing to find anything says nothing about existence.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{finish, optimal_face, receiver_map, select_with_faces, Equilibrium, Provenance};
use crate::error::{Error, Result};
use crate::lp::{Polytope, Rational};
use crate::model::{posteriors, GameSpec, SenderStrategy};
use crate::participation::feasible_sets;
use crate::types::TypeSet;

pub const DEFAULT_GRID_RESOLUTION: u32 = 60;

/// Returns the first grid equilibrium in lexicographic order of
/// `(s_1, s_2, s_3)`, or `None`. Grid points that merely swap the two
/// messages of another point are skipped; of each such pair the
/// lexicographically larger one is kept.
pub fn grid_mixed_search(game: &GameSpec, resolution: u32) -> Result<Option<Equilibrium>> {
    if game.type_count() != 3 {
        return Err(Error::WrongTypeCount {
            expected: 3,
            found: game.type_count(),
        });
    }
    if resolution == 0 {
        return Err(Error::InvalidStrategy("grid resolution must be positive".into()));
    }
    let r = resolution;
    let feasible = feasible_sets(game)?;
    let names: Vec<String> = ["m1", "m2", "m3"].iter().map(|s| String::from(*s)).collect();
    let denom = Rational::from_integer(r.into());
    let mut faces: BTreeMap<Vec<Rational>, Option<Polytope>> = BTreeMap::new();

    for s1 in 0..=r {
        for s2 in 0..=r {
            for s3 in 0..=r {
                let s = [s1, s2, s3];
                let mirror = [r - s1, r - s2, r - s3];
                if mirror > s {
                    continue;
                }
                let first: TypeSet = (0..3).filter(|&k| s[k] > 0).collect();
                let second: TypeSet = (0..3).filter(|&k| s[k] < r).collect();
                if !feasible[first.bits() as usize] || !feasible[second.bits() as usize] {
                    continue;
                }
                let rows = s
                    .iter()
                    .map(|&v| {
                        let p = Rational::from_integer(v.into()) / &denom;
                        let q = Rational::from_integer(1.into()) - &p;
                        vec![p, q, Rational::from_integer(0.into())]
                    })
                    .collect();
                let sigma = SenderStrategy::new(names.clone(), rows)?;
                let table = posteriors(game, &sigma)?;
                let mut on_path = Vec::new();
                let mut chosen = Vec::new();
                let mut dead = false;
                for e in &table.entries {
                    if !faces.contains_key(&e.belief) {
                        faces.insert(e.belief.clone(), optimal_face(game, &e.belief)?);
                    }
                    match &faces[&e.belief] {
                        Some(f) => chosen.push(f.clone()),
                        None => dead = true,
                    }
                    on_path.push(e.message_index);
                }
                if dead {
                    continue;
                }
                if let Some(props) = select_with_faces(game, &sigma, &on_path, &chosen)? {
                    let tau = receiver_map(names.clone(), props);
                    return finish(game, Provenance::GridSearch, sigma, tau, None).map(Some);
                }
            }
        }
    }
    Ok(None)
}
