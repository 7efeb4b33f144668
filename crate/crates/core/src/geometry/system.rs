//! Prototiles and substitution rules for the two shipped tiling systems.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::metric::{Point, Radius};
use super::patch::Patch;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Fibonacci,
    Chair,
}

impl System {
    pub fn tiling(self) -> &'static TilingSystem {
        static FIB: OnceLock<TilingSystem> = OnceLock::new();
        static CHAIR: OnceLock<TilingSystem> = OnceLock::new();
        match self {
            System::Fibonacci => FIB.get_or_init(TilingSystem::fibonacci),
            System::Chair => CHAIR.get_or_init(TilingSystem::chair),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            System::Fibonacci => "fibonacci",
            System::Chair => "chair",
        }
    }

    pub fn dimension(self) -> usize {
        match self {
            System::Fibonacci => 1,
            System::Chair => 2,
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for System {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fibonacci" | "fib" => Ok(System::Fibonacci),
            "chair" => Ok(System::Chair),
            _ => Err(Error::UnknownSystem(s.to_string())),
        }
    }
}

/// Shape of a prototile placed at the origin.
#[derive(Clone, Debug)]
pub enum Shape {
    /// Interval `[0, length]`.
    Interval(Scalar),
    /// Unit lattice cells `[x, x+1] × [y, y+1]`.
    Cells(Vec<(i64, i64)>),
}

#[derive(Clone, Debug)]
pub struct Prototile {
    pub id: usize,
    pub label: &'static str,
    pub shape: Shape,
    /// Centroid of the shape relative to the tile's translation.
    pub centroid: Point,
    pub diameter_sq: Scalar,
}

/// Tile translation: a coordinate in Z[φ] on the line, or a lattice vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Translation {
    Line(Scalar),
    Grid(i64, i64),
}

impl Translation {
    pub fn origin(dim: usize) -> Self {
        if dim == 1 {
            Translation::Line(Scalar::zero())
        } else {
            Translation::Grid(0, 0)
        }
    }

    pub fn to_point(&self) -> Point {
        match self {
            Translation::Line(x) => Point::line(x.clone()),
            Translation::Grid(x, y) => Point::plane(Scalar::from(*x), Scalar::from(*y)),
        }
    }

    fn inflate(&self, factor: &Scalar, offset: &Translation) -> Translation {
        match (self, offset) {
            (Translation::Line(x), Translation::Line(o)) => Translation::Line(x * factor + o),
            (Translation::Grid(x, y), Translation::Grid(ox, oy)) => {
                let k = integer_factor(factor);
                Translation::Grid(k * x + ox, k * y + oy)
            }
            _ => unreachable!("offset dimension matches tile dimension"),
        }
    }

    pub fn shifted(&self, by: &Translation) -> Translation {
        match (self, by) {
            (Translation::Line(x), Translation::Line(o)) => Translation::Line(x + o),
            (Translation::Grid(x, y), Translation::Grid(ox, oy)) => Translation::Grid(x + ox, y + oy),
            _ => unreachable!("shift dimension matches tile dimension"),
        }
    }
}

fn integer_factor(s: &Scalar) -> i64 {
    use num_traits::ToPrimitive;
    assert!(s.is_integer(), "lattice inflation must be an integer");
    s.rational_part().to_integer().to_i64().expect("small inflation")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tile {
    pub proto: usize,
    pub at: Translation,
}

#[derive(Clone, Debug)]
pub struct SubstitutionRule {
    pub inflation: Scalar,
    /// For each prototile, the children (prototile, offset) of its inflated image.
    pub images: Vec<Vec<(usize, Translation)>>,
}

#[derive(Clone, Debug)]
pub struct TilingSystem {
    pub system: System,
    pub prototiles: Vec<Prototile>,
    pub rule: SubstitutionRule,
}

fn l_triomino(missing: (i64, i64)) -> Vec<(i64, i64)> {
    [(0, 0), (1, 0), (0, 1), (1, 1)]
        .into_iter()
        .filter(|&c| c != missing)
        .collect()
}

fn cells_centroid(cells: &[(i64, i64)]) -> Point {
    let n = cells.len() as i64;
    let sx: i64 = cells.iter().map(|c| 2 * c.0 + 1).sum();
    let sy: i64 = cells.iter().map(|c| 2 * c.1 + 1).sum();
    Point::plane(Scalar::ratio(sx, 2 * n), Scalar::ratio(sy, 2 * n))
}

fn cells_diameter_sq(cells: &[(i64, i64)]) -> Scalar {
    let mut best = 0;
    for a in cells {
        for b in cells {
            for (dx, dy) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                for (ex, ey) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
                    let x = (a.0 + dx) - (b.0 + ex);
                    let y = (a.1 + dy) - (b.1 + ey);
                    best = best.max(x * x + y * y);
                }
            }
        }
    }
    Scalar::from(best)
}

impl TilingSystem {
    fn fibonacci() -> Self {
        let phi = Scalar::phi();
        let interval = |id, label, len: Scalar| Prototile {
            id,
            label,
            centroid: Point::line(&len / Scalar::from(2)),
            diameter_sq: &len * &len,
            shape: Shape::Interval(len),
        };
        TilingSystem {
            system: System::Fibonacci,
            prototiles: vec![interval(0, "a", phi.clone()), interval(1, "b", Scalar::one())],
            rule: SubstitutionRule {
                inflation: phi.clone(),
                images: vec![
                    vec![(0, Translation::Line(Scalar::zero())), (1, Translation::Line(phi))],
                    vec![(0, Translation::Line(Scalar::zero()))],
                ],
            },
        }
    }

    fn chair() -> Self {
        // label = quadrant missing from the 2×2 block; ids follow NE, SE, SW, NW
        let specs = [("NE", (1, 1)), ("SE", (1, 0)), ("SW", (0, 0)), ("NW", (0, 1))];
        let prototiles = specs
            .iter()
            .enumerate()
            .map(|(id, &(label, missing))| {
                let cells = l_triomino(missing);
                Prototile {
                    id,
                    label,
                    centroid: cells_centroid(&cells),
                    diameter_sq: cells_diameter_sq(&cells),
                    shape: Shape::Cells(cells),
                }
            })
            .collect();
        const NE: usize = 0;
        const SE: usize = 1;
        const SW: usize = 2;
        const NW: usize = 3;
        let g = Translation::Grid;
        // the same-orientation child sits at the inner corner (1,1) and at the
        // outer corner; the two arms carry the rotated children
        let images = vec![
            vec![(NE, g(1, 1)), (NE, g(0, 0)), (SE, g(0, 2)), (NW, g(2, 0))],
            vec![(SE, g(1, 1)), (SE, g(0, 2)), (SW, g(2, 2)), (NE, g(0, 0))],
            vec![(SW, g(1, 1)), (SW, g(2, 2)), (NW, g(2, 0)), (SE, g(0, 2))],
            vec![(NW, g(1, 1)), (NW, g(2, 0)), (NE, g(0, 0)), (SW, g(2, 2))],
        ];
        TilingSystem {
            system: System::Chair,
            prototiles,
            rule: SubstitutionRule {
                inflation: Scalar::from(2),
                images,
            },
        }
    }

    pub fn dimension(&self) -> usize {
        self.system.dimension()
    }

    pub fn proto_by_label(&self, label: &str) -> Result<usize> {
        self.prototiles
            .iter()
            .find(|p| p.label.eq_ignore_ascii_case(label))
            .map(|p| p.id)
            .ok_or_else(|| Error::UnknownPrototile(label.to_string()))
    }

    pub fn label(&self, proto: usize) -> &'static str {
        self.prototiles[proto].label
    }

    pub fn labels(&self) -> Vec<&'static str> {
        self.prototiles.iter().map(|p| p.label).collect()
    }

    fn check_proto(&self, proto: usize) -> Result<()> {
        if proto < self.prototiles.len() {
            Ok(())
        } else {
            Err(Error::UnknownPrototile(format!("#{proto}")))
        }
    }

    /// Tiles of the level-fold substitution of `proto`, anchored at the origin.
    pub fn supertile_tiles(&self, proto: usize, level: u32) -> Result<Vec<Tile>> {
        self.check_proto(proto)?;
        let mut tiles = vec![Tile {
            proto,
            at: Translation::origin(self.dimension()),
        }];
        for _ in 0..level {
            tiles = self.substitute(&tiles);
        }
        Ok(tiles)
    }

    /// One substitution step applied to every tile.
    pub fn substitute(&self, tiles: &[Tile]) -> Vec<Tile> {
        let mut out = Vec::with_capacity(tiles.len() * 4);
        for t in tiles {
            for (child, offset) in &self.rule.images[t.proto] {
                out.push(Tile {
                    proto: *child,
                    at: t.at.inflate(&self.rule.inflation, offset),
                });
            }
        }
        out
    }

    pub fn supertile(&self, proto: usize, level: u32) -> Result<Patch> {
        Patch::new(self.system, self.supertile_tiles(proto, level)?)
    }

    /// Number of tiles of each prototile in the `level`-supertile of `proto`,
    /// from powers of the substitution matrix.
    pub fn label_counts(&self, proto: usize, level: u32) -> Result<Vec<BigInt>> {
        self.check_proto(proto)?;
        let n = self.prototiles.len();
        let mut counts = vec![BigInt::zero(); n];
        counts[proto] = BigInt::from(1);
        for _ in 0..level {
            let mut next = vec![BigInt::zero(); n];
            for (p, c) in counts.iter().enumerate() {
                for (child, _) in &self.rule.images[p] {
                    next[*child] += c;
                }
            }
            counts = next;
        }
        Ok(counts)
    }

    pub fn tile_cells<'a>(&'a self, t: &'a Tile) -> impl Iterator<Item = (i64, i64)> + 'a {
        let (bx, by) = match t.at {
            Translation::Grid(x, y) => (x, y),
            Translation::Line(_) => panic!("tile_cells on a one-dimensional tile"),
        };
        let cells: &[(i64, i64)] = match &self.prototiles[t.proto].shape {
            Shape::Cells(c) => c,
            Shape::Interval(_) => &[],
        };
        cells.iter().map(move |&(x, y)| (bx + x, by + y))
    }

    /// `[left, right]` of a one-dimensional tile.
    pub fn tile_interval(&self, t: &Tile) -> (Scalar, Scalar) {
        let x = match &t.at {
            Translation::Line(x) => x,
            Translation::Grid(..) => panic!("tile_interval on a lattice tile"),
        };
        match &self.prototiles[t.proto].shape {
            Shape::Interval(len) => (x.clone(), x + len),
            Shape::Cells(_) => unreachable!(),
        }
    }

    pub fn centroid(&self, t: &Tile) -> Point {
        t.at.to_point().add(&self.prototiles[t.proto].centroid)
    }

    /// Squared distance from a point to the closed tile.
    pub fn dist2_to_tile(&self, t: &Tile, p: &Point) -> Scalar {
        match &t.at {
            Translation::Line(_) => {
                let (l, r) = self.tile_interval(t);
                let x = p.coord(0);
                let d = if *x < l {
                    &l - x
                } else if *x > r {
                    x - &r
                } else {
                    Scalar::zero()
                };
                &d * &d
            }
            Translation::Grid(..) => self
                .tile_cells(t)
                .map(|c| dist2_to_cell(c, p))
                .min()
                .expect("tiles have cells"),
        }
    }

    pub fn max_diameter_sq(&self) -> Scalar {
        self.prototiles
            .iter()
            .map(|p| p.diameter_sq.clone())
            .max()
            .expect("non-empty prototile set")
    }

    pub fn min_diameter_sq(&self) -> Scalar {
        self.prototiles
            .iter()
            .map(|p| p.diameter_sq.clone())
            .min()
            .expect("non-empty prototile set")
    }

    /// Half the largest diameter of a level-`k` supertile: the collar radius
    /// associated with supertile level `k`.
    pub fn collar_radius(&self, level: u32) -> Radius {
        let inflation_sq = &self.rule.inflation * &self.rule.inflation;
        let mut sq = self.max_diameter_sq() / Scalar::from(4);
        if self.system == System::Chair {
            // a level-k chair supertile is an L of side 2^(k+1): diameter² = 2·4^(k+1)
            sq = Scalar::from(2);
        }
        for _ in 0..level {
            sq = &sq * &inflation_sq;
        }
        Radius::from_squared(sq).expect("non-negative")
    }

    /// Verifies that every inflated prototile is exactly tiled by its image.
    pub fn check_rule(&self) -> Result<()> {
        for proto in &self.prototiles {
            let image = &self.rule.images[proto.id];
            match &proto.shape {
                Shape::Interval(len) => {
                    let mut pos = Scalar::zero();
                    for (child, offset) in image {
                        let Translation::Line(o) = offset else {
                            return Err(Error::InvalidPatch("mixed dimensions".into()));
                        };
                        if *o != pos {
                            return Err(Error::InvalidPatch(format!(
                                "image of {} has a gap or overlap",
                                proto.label
                            )));
                        }
                        if let Shape::Interval(cl) = &self.prototiles[*child].shape {
                            pos = &pos + cl;
                        }
                    }
                    if pos != &self.rule.inflation * len {
                        return Err(Error::InvalidPatch(format!(
                            "image of {} has the wrong length",
                            proto.label
                        )));
                    }
                }
                Shape::Cells(cells) => {
                    let k = integer_factor(&self.rule.inflation);
                    let mut want: Vec<(i64, i64)> = cells
                        .iter()
                        .flat_map(|&(x, y)| {
                            (0..k).flat_map(move |i| (0..k).map(move |j| (k * x + i, k * y + j)))
                        })
                        .collect();
                    let mut got: Vec<(i64, i64)> = image
                        .iter()
                        .flat_map(|(child, offset)| {
                            self.tile_cells(&Tile {
                                proto: *child,
                                at: offset.clone(),
                            })
                            .collect::<Vec<_>>()
                        })
                        .collect();
                    want.sort();
                    got.sort();
                    if want != got {
                        return Err(Error::InvalidPatch(format!(
                            "image of {} does not tile its inflated shape",
                            proto.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn dist2_to_cell(c: (i64, i64), p: &Point) -> Scalar {
    let axis = |lo: i64, v: &Scalar| {
        let lo_s = Scalar::from(lo);
        let hi_s = Scalar::from(lo + 1);
        if *v < lo_s {
            lo_s - v
        } else if *v > hi_s {
            v - hi_s
        } else {
            Scalar::zero()
        }
    };
    let dx = axis(c.0, p.coord(0));
    let dy = axis(c.1, p.coord(1));
    &dx * &dx + &dy * &dy
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn shipped_rules_are_exact() {
        System::Fibonacci.tiling().check_rule().unwrap();
        System::Chair.tiling().check_rule().unwrap();
    }

    /// Enumerates every tiling of the inflated NE tile by L-triominoes.
    fn tilings_of(region: &HashSet<(i64, i64)>) -> Vec<Vec<(usize, (i64, i64))>> {
        fn go(
            free: &mut HashSet<(i64, i64)>,
            acc: &mut Vec<(usize, (i64, i64))>,
            out: &mut Vec<Vec<(usize, (i64, i64))>>,
        ) {
            let Some(&first) = free.iter().min() else {
                out.push(acc.clone());
                return;
            };
            let missing = [(1, 1), (1, 0), (0, 0), (0, 1)];
            for (label, m) in missing.iter().enumerate() {
                for bx in first.0 - 1..=first.0 {
                    for by in first.1 - 1..=first.1 {
                        let cells: Vec<(i64, i64)> = l_triomino(*m)
                            .into_iter()
                            .map(|(x, y)| (bx + x, by + y))
                            .collect();
                        if cells.contains(&first) && cells.iter().all(|c| free.contains(c)) {
                            for c in &cells {
                                free.remove(c);
                            }
                            acc.push((label, (bx, by)));
                            go(free, acc, out);
                            acc.pop();
                            for c in cells {
                                free.insert(c);
                            }
                        }
                    }
                }
            }
        }
        let mut free = region.clone();
        let mut out = Vec::new();
        go(&mut free, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn inflated_ne_tile_has_a_unique_triomino_tiling() {
        let region: HashSet<(i64, i64)> = (0..4)
            .flat_map(|x| (0..4).map(move |y| (x, y)))
            .filter(|&(x, y)| x < 2 || y < 2)
            .collect();
        let all = tilings_of(&region);
        assert_eq!(all.len(), 1);
        let mut found = all[0].clone();
        found.sort();
        let mut shipped: Vec<(usize, (i64, i64))> = System::Chair.tiling().rule.images[0]
            .iter()
            .map(|(p, t)| match t {
                Translation::Grid(x, y) => (*p, (*x, *y)),
                _ => unreachable!(),
            })
            .collect();
        shipped.sort();
        assert_eq!(found, shipped);
    }

    #[test]
    fn fibonacci_counts_follow_the_recurrence() {
        let sys = System::Fibonacci.tiling();
        let (mut a, mut b) = (1u64, 0u64);
        for m in 0..20 {
            let c = sys.label_counts(0, m).unwrap();
            assert_eq!(c, vec![BigInt::from(a), BigInt::from(b)], "level {m}");
            (a, b) = (a + b, a);
        }
    }

    #[test]
    fn chair_counts_quadruple() {
        let sys = System::Chair.tiling();
        for m in 0..10 {
            let total: BigInt = sys.label_counts(0, m).unwrap().iter().sum();
            assert_eq!(total, BigInt::from(4u64.pow(m)));
        }
    }

    #[test]
    fn unknown_proto_is_an_error() {
        assert!(matches!(
            System::Chair.tiling().supertile_tiles(9, 1),
            Err(Error::UnknownPrototile(_))
        ));
        assert!(System::Chair.tiling().proto_by_label("XX").is_err());
    }

    #[test]
    fn chair_centroids_and_diameters() {
        let sys = System::Chair.tiling();
        let ne = &sys.prototiles[0];
        assert_eq!(ne.centroid, Point::plane(Scalar::ratio(5, 6), Scalar::ratio(5, 6)));
        assert_eq!(ne.diameter_sq, Scalar::from(8));
        assert_eq!(sys.collar_radius(1).squared(), &Scalar::from(8));
        let fib = System::Fibonacci.tiling();
        // level-1 a-supertile has length φ², half of it squared is φ⁴/4
        let expect = Scalar::phi().pow(4).unwrap() / Scalar::from(4);
        assert_eq!(fib.collar_radius(1).squared(), &expect);
    }
}
