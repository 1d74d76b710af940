use serde::Serialize;

use super::verdict::{decide_equivalence, Verdict};
use crate::error::{Error, Result};
use crate::functor::CurveData;
use crate::modules::enumerate_modules;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImageRow {
    pub rank: usize,
    /// Isomorphism classes in the image of HOM_R(−, E): modules over End E.
    pub image: usize,
    /// All classes isogenous to E^rank: modules over Z[π]. Absent when that
    /// description does not apply.
    pub total: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImageReport {
    pub verdict: Verdict,
    pub f0: u64,
    #[serde(rename = "fE")]
    pub f_e: u64,
    pub rows: Vec<ImageRow>,
}

/// Counts the varieties in the functor's image and, when isogeny classes are
/// described by Z[π]-modules, all varieties isogenous to E^n, for n ≤ max_rank.
pub fn describe_image(data: &CurveData, max_rank: usize) -> Result<ImageReport> {
    let v = decide_equivalence(data)?;
    let (Some(f0), Some(f_e)) = (v.f0, v.f_e) else {
        return Err(Error::UnsupportedCase("image description needs a rank-2 endomorphism ring".into()));
    };
    let end = data.end_order()?;
    let zpi = data.frobenius_order().expect("rank 2");
    let describable = !data.is_supersingular() || data.q() == data.characteristic();
    let mut rows = Vec::new();
    for rank in 1..=max_rank {
        let image = enumerate_modules(&end, rank, data.bounds())?.len();
        let total = if describable { Some(enumerate_modules(&zpi, rank, data.bounds())?.len()) } else { None };
        rows.push(ImageRow { rank, image, total });
    }
    Ok(ImageReport { verdict: v.verdict, f0, f_e, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::test_curve as data;

    #[test]
    fn image_counts() {
        let r = describe_image(&data(5, 1, [0, 0, 0, 1, 1]), 2).unwrap();
        assert_eq!(r.rows.iter().map(|x| (x.image, x.total)).collect::<Vec<_>>(), vec![(1, Some(1)), (1, Some(1))]);
        let r = describe_image(&data(5, 1, [0, 0, 0, 1, 0]), 1).unwrap();
        assert_eq!(r.verdict, Verdict::No);
        assert_eq!((r.rows[0].image, r.rows[0].total), (1, Some(2)));
    }
}
