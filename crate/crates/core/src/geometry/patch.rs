//! Finite patches and their cell complexes.

use std::collections::{BTreeMap, HashMap};

use super::metric::{Point, Radius};
use super::system::{dist2_to_cell, System, Tile, TilingSystem, Translation};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A codimension-one cell. One-dimensional faces are vertices oriented
/// rightward; two-dimensional faces are unit lattice edges whose orientation
/// normal is `+x` for vertical edges and `+y` for horizontal ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FaceKey {
    Vertex(Scalar),
    /// Vertical edges run from `(x, y)` to `(x, y+1)`, horizontal ones to `(x+1, y)`.
    Edge { x: i64, y: i64, vertical: bool },
}

impl FaceKey {
    /// The point at which the face's collar is centred.
    pub fn anchor(&self) -> Point {
        match self {
            FaceKey::Vertex(x) => Point::line(x.clone()),
            FaceKey::Edge { x, y, vertical } => {
                let (x, y) = (Scalar::from(*x), Scalar::from(*y));
                let half = Scalar::ratio(1, 2);
                if *vertical {
                    Point::plane(x, y + half)
                } else {
                    Point::plane(x + half, y)
                }
            }
        }
    }

    pub fn translated(&self, by: &Translation) -> FaceKey {
        match (self, by) {
            (FaceKey::Vertex(x), Translation::Line(o)) => FaceKey::Vertex(x + o),
            (FaceKey::Edge { x, y, vertical }, Translation::Grid(ox, oy)) => FaceKey::Edge {
                x: x + ox,
                y: y + oy,
                vertical: *vertical,
            },
            _ => panic!("translation dimension does not match face"),
        }
    }
}

/// A face together with the tiles on either side. The orientation points out
/// of `back` and into `front`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub key: FaceKey,
    pub back: Option<usize>,
    pub front: Option<usize>,
}

impl Face {
    pub fn is_interior(&self) -> bool {
        self.back.is_some() && self.front.is_some()
    }
}

/// Reference to a cell of a patch, used to anchor collar signatures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CellRef {
    Tile(usize),
    Face(usize),
    Vertex(Point),
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdjacencyEdge {
    pub a: usize,
    pub b: usize,
    pub shared_faces: usize,
    pub measure: Scalar,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Adjacency {
    pub nodes: usize,
    pub edges: Vec<AdjacencyEdge>,
}

#[derive(Clone, Debug)]
pub struct Patch {
    system: System,
    tiles: Vec<Tile>,
    faces: Vec<Face>,
    face_index: HashMap<FaceKey, usize>,
    /// Per tile, its faces with the outward sign (+1 when the orientation points out).
    tile_faces: Vec<Vec<(usize, i8)>>,
    centroids: Vec<Point>,
    centroids_f64: Vec<[f64; 2]>,
    cells: HashMap<(i64, i64), usize>,
    lefts_f64: Vec<f64>,
}

impl Patch {
    /// Builds a patch, requiring it to be connected (or empty).
    pub fn new(system: System, tiles: Vec<Tile>) -> Result<Self> {
        let patch = Patch::new_unconnected(system, tiles)?;
        if patch.components().len() > 1 {
            return Err(Error::InvalidPatch("tiles do not form a connected patch".into()));
        }
        Ok(patch)
    }

    /// Builds a patch that may consist of several components. One-dimensional
    /// tiles are reordered left to right.
    pub fn new_unconnected(system: System, mut tiles: Vec<Tile>) -> Result<Self> {
        let sys = system.tiling();
        for t in &tiles {
            if t.proto >= sys.prototiles.len() {
                return Err(Error::UnknownPrototile(format!("#{}", t.proto)));
            }
            let ok = matches!(
                (&t.at, system.dimension()),
                (Translation::Line(_), 1) | (Translation::Grid(..), 2)
            );
            if !ok {
                return Err(Error::InvalidPatch(format!(
                    "translation {:?} does not fit the {system} tiling",
                    t.at
                )));
            }
        }
        match system.dimension() {
            1 => {
                tiles.sort_by(|a, b| a.at.cmp(&b.at));
                Patch::build_line(system, tiles)
            }
            _ => Patch::build_grid(system, tiles),
        }
    }

    fn build_line(system: System, tiles: Vec<Tile>) -> Result<Self> {
        let sys = system.tiling();
        let mut ends: BTreeMap<Scalar, (Option<usize>, Option<usize>)> = BTreeMap::new();
        let mut prev_right: Option<Scalar> = None;
        for (i, t) in tiles.iter().enumerate() {
            let (l, r) = sys.tile_interval(t);
            if let Some(pr) = &prev_right {
                if l < *pr {
                    return Err(Error::InvalidPatch(format!("tiles overlap at {l}")));
                }
            }
            ends.entry(r.clone()).or_default().0 = Some(i);
            ends.entry(l).or_default().1 = Some(i);
            prev_right = Some(r);
        }
        let faces: Vec<Face> = ends
            .into_iter()
            .map(|(x, (back, front))| Face {
                key: FaceKey::Vertex(x),
                back,
                front,
            })
            .collect();
        let lefts_f64 = tiles
            .iter()
            .map(|t| sys.tile_interval(t).0.to_f64())
            .collect();
        Ok(Patch::finish(system, tiles, faces, HashMap::new(), lefts_f64))
    }

    fn build_grid(system: System, tiles: Vec<Tile>) -> Result<Self> {
        let sys = system.tiling();
        let mut cells = HashMap::new();
        for (i, t) in tiles.iter().enumerate() {
            for c in sys.tile_cells(t) {
                if let Some(j) = cells.insert(c, i) {
                    return Err(Error::InvalidPatch(format!(
                        "tiles {j} and {i} overlap at cell {c:?}"
                    )));
                }
            }
        }
        let mut sides: HashMap<FaceKey, (Option<usize>, Option<usize>)> = HashMap::new();
        for (i, t) in tiles.iter().enumerate() {
            for (x, y) in sys.tile_cells(t) {
                let neighbours = [
                    ((x - 1, y), FaceKey::Edge { x, y, vertical: true }, false),
                    ((x + 1, y), FaceKey::Edge { x: x + 1, y, vertical: true }, true),
                    ((x, y - 1), FaceKey::Edge { x, y, vertical: false }, false),
                    ((x, y + 1), FaceKey::Edge { x, y: y + 1, vertical: false }, true),
                ];
                for (other, key, outward) in neighbours {
                    if cells.get(&other) == Some(&i) {
                        continue;
                    }
                    let entry = sides.entry(key).or_default();
                    if outward {
                        entry.0 = Some(i);
                    } else {
                        entry.1 = Some(i);
                    }
                }
            }
        }
        let mut faces: Vec<Face> = sides
            .into_iter()
            .map(|(key, (back, front))| Face { key, back, front })
            .collect();
        faces.sort_by(|a, b| a.key.cmp(&b.key));
        Ok(Patch::finish(system, tiles, faces, cells, Vec::new()))
    }

    fn finish(
        system: System,
        tiles: Vec<Tile>,
        faces: Vec<Face>,
        cells: HashMap<(i64, i64), usize>,
        lefts_f64: Vec<f64>,
    ) -> Self {
        let sys = system.tiling();
        let face_index = faces
            .iter()
            .enumerate()
            .map(|(i, f)| (f.key.clone(), i))
            .collect();
        let mut tile_faces = vec![Vec::new(); tiles.len()];
        for (fi, f) in faces.iter().enumerate() {
            if let Some(b) = f.back {
                tile_faces[b].push((fi, 1));
            }
            if let Some(fr) = f.front {
                tile_faces[fr].push((fi, -1));
            }
        }
        let centroids: Vec<Point> = tiles.iter().map(|t| sys.centroid(t)).collect();
        let centroids_f64 = centroids.iter().map(Point::to_f64).collect();
        Patch {
            system,
            tiles,
            faces,
            face_index,
            tile_faces,
            centroids,
            centroids_f64,
            cells,
            lefts_f64,
        }
    }

    pub fn system(&self) -> System {
        self.system
    }

    pub fn tiling(&self) -> &'static TilingSystem {
        self.system.tiling()
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, key: &FaceKey) -> Option<usize> {
        self.face_index.get(key).copied()
    }

    /// Faces of a tile with their outward signs.
    pub fn tile_faces(&self, tile: usize) -> &[(usize, i8)] {
        &self.tile_faces[tile]
    }

    pub fn centroid(&self, tile: usize) -> &Point {
        &self.centroids[tile]
    }

    pub fn centroid_f64(&self, tile: usize) -> [f64; 2] {
        self.centroids_f64[tile]
    }

    pub fn centroid_dist2(&self, a: usize, b: usize) -> Scalar {
        self.centroids[a].dist2(&self.centroids[b])
    }

    pub fn centroid_dist2_f64(&self, a: usize, b: usize) -> f64 {
        let (p, q) = (self.centroids_f64[a], self.centroids_f64[b]);
        (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)
    }

    /// Tile owning a unit cell (two-dimensional patches only).
    pub fn cell_owner(&self, cell: (i64, i64)) -> Option<usize> {
        self.cells.get(&cell).copied()
    }

    pub fn interior_faces(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(|&i| self.faces[i].is_interior())
    }

    pub fn boundary_faces(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(|&i| !self.faces[i].is_interior())
    }

    /// Boundary measure: number of boundary vertices in 1-D, unit boundary edges in 2-D.
    pub fn boundary_measure(&self) -> Scalar {
        Scalar::from(self.boundary_faces().count())
    }

    pub fn adjacency(&self) -> Adjacency {
        let mut shared: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for f in &self.faces {
            if let (Some(a), Some(b)) = (f.back, f.front) {
                *shared.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let edges = shared
            .into_iter()
            .map(|((a, b), n)| AdjacencyEdge {
                a,
                b,
                shared_faces: n,
                measure: if self.system.dimension() == 1 {
                    Scalar::zero()
                } else {
                    Scalar::from(n)
                },
                distance: self.centroid_dist2_f64(a, b).sqrt(),
            })
            .collect();
        Adjacency {
            nodes: self.tiles.len(),
            edges,
        }
    }

    /// Connected components under face adjacency, each sorted, ordered by first tile.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.tiles.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for f in &self.faces {
            if let (Some(a), Some(b)) = (f.back, f.front) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    /// Patch made of the given tiles; it need not be connected.
    pub fn subpatch(&self, indices: &[usize]) -> Result<Patch> {
        let tiles = indices
            .iter()
            .map(|&i| {
                self.tiles
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidPatch(format!("no tile {i}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Patch::new_unconnected(self.system, tiles)
    }

    pub fn translated(&self, by: &Translation) -> Result<Patch> {
        let tiles = self
            .tiles
            .iter()
            .map(|t| Tile {
                proto: t.proto,
                at: t.at.shifted(by),
            })
            .collect();
        Patch::new_unconnected(self.system, tiles)
    }

    /// Diagonal of the bounding box of tile centroids, plus one maximal tile diameter.
    pub fn diameter_f64(&self) -> f64 {
        if self.tiles.is_empty() {
            return 0.0;
        }
        let mut lo = [f64::INFINITY; 2];
        let mut hi = [f64::NEG_INFINITY; 2];
        for c in &self.centroids_f64 {
            for k in 0..2 {
                lo[k] = lo[k].min(c[k]);
                hi[k] = hi[k].max(c[k]);
            }
        }
        let diag = ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt();
        diag + self.tiling().max_diameter_sq().to_f64().sqrt()
    }

    /// Anchor point of a cell: tile centroid, face midpoint, or the vertex itself.
    pub fn anchor(&self, cell: &CellRef) -> Result<Point> {
        match cell {
            CellRef::Tile(i) => self
                .centroids
                .get(*i)
                .cloned()
                .ok_or_else(|| Error::InvalidPatch(format!("no tile {i}"))),
            CellRef::Face(i) => self
                .faces
                .get(*i)
                .map(|f| f.key.anchor())
                .ok_or_else(|| Error::InvalidPatch(format!("no face {i}"))),
            CellRef::Vertex(p) => {
                if p.dim() != self.system.dimension() {
                    return Err(Error::InvalidPatch("vertex dimension mismatch".into()));
                }
                Ok(p.clone())
            }
        }
    }

    /// Tiles meeting the closed ball, or `None` if the ball is not covered by the patch.
    pub fn tiles_meeting_ball(&self, centre: &Point, radius: &Radius) -> Option<Vec<usize>> {
        if self.system.dimension() == 1 {
            self.line_ball(centre, radius)
        } else {
            self.grid_ball(centre, radius)
        }
    }

    fn line_ball(&self, centre: &Point, radius: &Radius) -> Option<Vec<usize>> {
        let sys = self.tiling();
        let (first, last) = (self.tiles.first()?, self.tiles.last()?);
        let lo = sys.tile_interval(first).0;
        let hi = sys.tile_interval(last).1;
        let x = centre.coord(0);
        // the ball must sit strictly inside so that no outside tile can touch it
        let to_lo = x - &lo;
        let to_hi = &hi - x;
        if !to_lo.is_positive() || !to_hi.is_positive() {
            return None;
        }
        if !radius.exceeded_by(&(&to_lo * &to_lo)) || !radius.exceeded_by(&(&to_hi * &to_hi)) {
            return None;
        }
        let r = radius.to_f64();
        let xf = x.to_f64();
        let start = self.lefts_f64.partition_point(|&l| l < xf - r - 4.0);
        let mut out = Vec::new();
        for i in start..self.tiles.len() {
            if self.lefts_f64[i] > xf + r + 1.0 {
                break;
            }
            if radius.admits(&sys.dist2_to_tile(&self.tiles[i], centre)) {
                out.push(i);
            }
        }
        Some(out)
    }

    fn grid_ball(&self, centre: &Point, radius: &Radius) -> Option<Vec<usize>> {
        let [cx, cy] = centre.to_f64();
        let r = radius.to_f64();
        let (x0, x1) = ((cx - r).floor() as i64 - 1, (cx + r).ceil() as i64 + 1);
        let (y0, y1) = ((cy - r).floor() as i64 - 1, (cy + r).ceil() as i64 + 1);
        let mut out = Vec::new();
        for x in x0..=x1 {
            for y in y0..=y1 {
                let dx = (x as f64 - cx).max(0.0).max(cx - (x + 1) as f64);
                let dy = (y as f64 - cy).max(0.0).max(cy - (y + 1) as f64);
                let d2 = dx * dx + dy * dy;
                if !radius.admits_approx(d2, || dist2_to_cell((x, y), centre)) {
                    continue;
                }
                match self.cells.get(&(x, y)) {
                    Some(&t) => out.push(t),
                    None => return None,
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        Some(out)
    }

    /// Per tile, the distance from its centroid to the nearest boundary face midpoint.
    pub fn boundary_distances_f64(&self) -> Vec<f64> {
        let anchors: Vec<[f64; 2]> = self
            .boundary_faces()
            .map(|i| self.faces[i].key.anchor().to_f64())
            .collect();
        self.centroids_f64
            .iter()
            .map(|c| {
                anchors
                    .iter()
                    .map(|a| ((a[0] - c[0]).powi(2) + (a[1] - c[1]).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chair(level: u32) -> Patch {
        System::Chair.tiling().supertile(0, level).unwrap()
    }

    #[test]
    fn single_tiles_and_boundaries() {
        let p = chair(0);
        assert_eq!(p.boundary_measure(), Scalar::from(8));
        assert_eq!(p.adjacency().edges.len(), 0);
        assert_eq!(chair(1).boundary_measure(), Scalar::from(16));
        let f = System::Fibonacci.tiling().supertile(0, 6).unwrap();
        assert_eq!(f.boundary_measure(), Scalar::from(2));
    }

    #[test]
    fn chair_one_supertile_adjacency_hand_count() {
        let adj = chair(1).adjacency();
        assert_eq!(adj.nodes, 4);
        assert_eq!(adj.edges.len(), 5);
        let shared: usize = adj.edges.iter().map(|e| e.shared_faces).sum();
        assert_eq!(shared, 8);
        let mut per_pair: Vec<usize> = adj.edges.iter().map(|e| e.shared_faces).collect();
        per_pair.sort();
        assert_eq!(per_pair, vec![1, 1, 2, 2, 2]);
    }

    #[test]
    fn fibonacci_aba_is_a_path() {
        let p = System::Fibonacci.tiling().supertile(0, 2).unwrap();
        let labels: Vec<&str> = p.tiles().iter().map(|t| p.tiling().label(t.proto)).collect();
        assert_eq!(labels, ["a", "b", "a"]);
        let adj = p.adjacency();
        let pairs: Vec<(usize, usize)> = adj.edges.iter().map(|e| (e.a, e.b)).collect();
        assert_eq!(pairs, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn every_tile_face_sign_is_consistent() {
        let p = chair(3);
        for (t, faces) in p.tile_faces.iter().enumerate() {
            assert_eq!(faces.len(), 8);
            for &(f, s) in faces {
                let face = &p.faces()[f];
                if s > 0 {
                    assert_eq!(face.back, Some(t));
                } else {
                    assert_eq!(face.front, Some(t));
                }
            }
        }
    }

    #[test]
    fn overlap_and_disconnection_rejected() {
        let t = Tile {
            proto: 0,
            at: Translation::Grid(0, 0),
        };
        assert!(Patch::new(System::Chair, vec![t.clone(), t.clone()]).is_err());
        let far = Tile {
            proto: 0,
            at: Translation::Grid(10, 0),
        };
        assert!(Patch::new(System::Chair, vec![t.clone(), far.clone()]).is_err());
        let p = Patch::new_unconnected(System::Chair, vec![t, far]).unwrap();
        assert_eq!(p.components().len(), 2);
        let bad = Tile {
            proto: 0,
            at: Translation::Line(Scalar::zero()),
        };
        assert!(Patch::new(System::Chair, vec![bad]).is_err());
    }

    #[test]
    fn empty_patch_is_valid() {
        let p = Patch::new(System::Chair, vec![]).unwrap();
        assert!(p.is_empty());
        assert_eq!(p.boundary_measure(), Scalar::zero());
    }

    #[test]
    fn supertile_covers_inflated_shape() {
        let sys = System::Chair.tiling();
        for proto in 0..4 {
            for level in 0..5u32 {
                let p = sys.supertile(proto, level).unwrap();
                let side = 1i64 << level;
                let Translation::Grid(..) = p.tiles()[0].at else { unreachable!() };
                let base = sys.supertile(proto, 0).unwrap();
                for (x, y) in sys.tile_cells(&base.tiles()[0]) {
                    for i in 0..side {
                        for j in 0..side {
                            assert!(p.cell_owner((x * side + i, y * side + j)).is_some());
                        }
                    }
                }
                assert_eq!(p.cells.len() as i64, 3 * side * side);
            }
        }
    }
}
