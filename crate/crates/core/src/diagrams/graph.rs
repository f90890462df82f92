//! Unitrivalent graphs with cyclic orders at trivalent vertices, stored as
//! darts, and their canonical forms modulo the AS relation.

use std::collections::VecDeque;

use crate::freelie::LieTree;

pub type Color = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub v: u32,
    pub slot: u8,
}

impl Dart {
    pub fn new(v: usize, slot: usize) -> Self {
        Dart { v: v as u32, slot: slot as u8 }
    }
}

const UNSET: Dart = Dart { v: u32::MAX, slot: 0 };

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vertex {
    Leg(Color),
    Tri,
}

/// A Jacobi diagram: univalent legs with colors, trivalent vertices whose
/// three slots are in cyclic order, and a count of vertex-free circles.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    pub verts: Vec<Vertex>,
    /// `link[v][s]` is the dart opposite slot `s` of vertex `v`.
    pub link: Vec<[Dart; 3]>,
    pub circles: u32,
}

impl Diagram {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn add_leg(&mut self, c: Color) -> usize {
        self.verts.push(Vertex::Leg(c));
        self.link.push([UNSET; 3]);
        self.verts.len() - 1
    }

    pub fn add_tri(&mut self) -> usize {
        self.verts.push(Vertex::Tri);
        self.link.push([UNSET; 3]);
        self.verts.len() - 1
    }

    pub fn connect(&mut self, a: Dart, b: Dart) {
        self.link[a.v as usize][a.slot as usize] = b;
        self.link[b.v as usize][b.slot as usize] = a;
    }

    pub fn opposite(&self, d: Dart) -> Dart {
        self.link[d.v as usize][d.slot as usize]
    }

    pub fn strut(a: Color, b: Color) -> Self {
        let mut d = Diagram::empty();
        let x = d.add_leg(a);
        let y = d.add_leg(b);
        d.connect(Dart::new(x, 0), Dart::new(y, 0));
        d
    }

    /// `Y` graph whose legs read `a, b, c` in the cyclic order.
    pub fn y(a: Color, b: Color, c: Color) -> Self {
        let mut d = Diagram::empty();
        let v = d.add_tri();
        for (s, col) in [a, b, c].into_iter().enumerate() {
            let l = d.add_leg(col);
            d.connect(Dart::new(v, s), Dart::new(l, 0));
        }
        d
    }

    /// Tree with a root leg colored `root` attached to a bracket tree; at each
    /// node the slots are parent, left child, right child.
    pub fn from_rooted(root: Color, t: &LieTree) -> Self {
        let mut d = Diagram::empty();
        let r = d.add_leg(root);
        d.attach(Dart::new(r, 0), t);
        d
    }

    /// Builds `t` below the free dart `parent`.
    pub fn attach(&mut self, parent: Dart, t: &LieTree) {
        match t {
            LieTree::Leaf(c) => {
                let l = self.add_leg(*c as Color);
                self.connect(parent, Dart::new(l, 0));
            }
            LieTree::Node(a, b) => {
                let v = self.add_tri();
                self.connect(parent, Dart::new(v, 0));
                self.attach(Dart::new(v, 1), a);
                self.attach(Dart::new(v, 2), b);
            }
        }
    }

    /// The tree hanging off a leg, read as a bracket: at each trivalent
    /// vertex the children are the two darts following the entry dart.
    pub fn rooted_at(&self, leg: usize) -> Option<LieTree> {
        let first = self.opposite(Dart::new(leg, 0));
        match self.verts[first.v as usize] {
            Vertex::Leg(_) => None,
            Vertex::Tri => Some(self.read_from(first)),
        }
    }

    fn read_from(&self, entry: Dart) -> LieTree {
        let v = entry.v as usize;
        let child = |i: u8| {
            let o = self.link[v][((entry.slot + i) % 3) as usize];
            match self.verts[o.v as usize] {
                Vertex::Leg(c) => LieTree::Leaf(c as u8),
                Vertex::Tri => self.read_from(o),
            }
        };
        LieTree::node(child(1), child(2))
    }

    pub fn ideg(&self) -> usize {
        self.verts.iter().filter(|v| matches!(v, Vertex::Tri)).count()
    }

    pub fn legs(&self) -> impl Iterator<Item = (usize, Color)> + '_ {
        self.verts.iter().enumerate().filter_map(|(i, v)| match v {
            Vertex::Leg(c) => Some((i, *c)),
            Vertex::Tri => None,
        })
    }

    pub fn leg_count(&self) -> usize {
        self.legs().count()
    }

    fn degree(&self, v: usize) -> usize {
        match self.verts[v] {
            Vertex::Leg(_) => 1,
            Vertex::Tri => 3,
        }
    }

    /// Connected components as vertex lists (circles are not included).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.verts.len()];
        let mut out = Vec::new();
        for s in 0..self.verts.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                for slot in 0..self.degree(v) {
                    let w = self.link[v][slot].v as usize;
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                i += 1;
            }
            out.push(comp);
        }
        out
    }

    /// True if some component has a cycle or there are free circles.
    pub fn has_loop(&self) -> bool {
        if self.circles > 0 {
            return true;
        }
        self.components().iter().any(|c| {
            let darts: usize = c.iter().map(|&v| self.degree(v)).sum();
            darts / 2 >= c.len()
        })
    }

    pub fn is_connected_tree(&self) -> bool {
        self.circles == 0 && self.components().len() == 1 && !self.has_loop()
    }

    /// Components made of a single edge between two legs.
    pub fn strut_count(&self) -> usize {
        self.components().iter().filter(|c| c.len() == 2 && c.iter().all(|&v| self.degree(v) == 1)).count()
    }

    pub fn map_colors(&self, f: impl Fn(Color) -> Color) -> Diagram {
        let mut d = self.clone();
        for v in d.verts.iter_mut() {
            if let Vertex::Leg(c) = v {
                *c = f(*c);
            }
        }
        d
    }

    pub fn disjoint_union(&self, other: &Diagram) -> Diagram {
        let off = self.verts.len() as u32;
        let mut d = self.clone();
        d.verts.extend_from_slice(&other.verts);
        d.link.extend(other.link.iter().map(|slots| slots.map(|x| if x == UNSET { UNSET } else { Dart { v: x.v + off, slot: x.slot } })));
        d.circles += other.circles;
        d
    }

    /// Removes the listed legs and joins their neighbours pairwise as given.
    /// Chains of legs glued through struts are followed; a chain that closes
    /// up becomes a free circle.
    pub fn glue(&self, pairs: &[(usize, usize)]) -> Diagram {
        let n = self.verts.len();
        let mut partner = vec![usize::MAX; n];
        for &(a, b) in pairs {
            debug_assert!(matches!(self.verts[a], Vertex::Leg(_)) && matches!(self.verts[b], Vertex::Leg(_)));
            partner[a] = b;
            partner[b] = a;
        }
        let glued = |v: usize| partner[v] != usize::MAX;
        let keep: Vec<usize> = (0..n).filter(|&v| !glued(v)).collect();
        let mut newid = vec![usize::MAX; n];
        for (i, &v) in keep.iter().enumerate() {
            newid[v] = i;
        }
        let mut out = Diagram { verts: keep.iter().map(|&v| self.verts[v]).collect(), link: vec![[UNSET; 3]; keep.len()], circles: self.circles };
        // follow each dart through glued legs to its final endpoint, marking
        // the legs passed; unmarked glued legs then lie on closed chains
        let mut on_open = vec![false; n];
        for &v in &keep {
            for s in 0..self.degree(v) {
                let mut o = self.opposite(Dart::new(v, s));
                while glued(o.v as usize) {
                    let w = o.v as usize;
                    on_open[w] = true;
                    on_open[partner[w]] = true;
                    o = self.opposite(Dart::new(partner[w], 0));
                }
                out.link[newid[v]][s] = Dart::new(newid[o.v as usize], o.slot as usize);
            }
        }
        for v in 0..n {
            if glued(v) && !on_open[v] {
                let mut cur = v;
                while !on_open[cur] {
                    on_open[cur] = true;
                    let o = self.opposite(Dart::new(cur, 0)).v as usize;
                    on_open[o] = true;
                    cur = partner[o];
                }
                out.circles += 1;
            }
        }
        out
    }

    /// Canonical representative modulo AS and isomorphism. Returns the
    /// representative, the sign relating it to `self`, and whether the
    /// diagram equals its own negative.
    pub fn canonical(&self) -> (Diagram, i32, bool) {
        let mut parts: Vec<(Vec<u32>, Diagram)> = Vec::new();
        let mut sign = 1;
        let mut ambiguous = false;
        for comp in self.components() {
            let c = self.canonical_component(&comp);
            sign *= c.sign;
            ambiguous |= c.ambiguous;
            parts.push((c.code, c.diagram));
        }
        parts.sort();
        let mut out = Diagram { circles: self.circles, ..Diagram::default() };
        for (_, d) in parts {
            out = out.disjoint_union(&d);
        }
        (out, sign, ambiguous)
    }

    fn canonical_component(&self, comp: &[usize]) -> CanonicalPart {
        let tris: Vec<usize> = comp.iter().copied().filter(|&v| self.verts[v] == Vertex::Tri).collect();
        let mut tri_pos = vec![usize::MAX; self.verts.len()];
        for (i, &v) in tris.iter().enumerate() {
            tri_pos[v] = i;
        }
        let legs: Vec<Dart> = comp.iter().filter(|&&v| self.degree(v) == 1).map(|&v| Dart::new(v, 0)).collect();
        let starts: Vec<Dart> = if legs.is_empty() {
            tris.iter().flat_map(|&v| (0..3).map(move |s| Dart::new(v, s))).collect()
        } else {
            legs
        };
        let mut best: Option<(Vec<u32>, u64, Dart)> = None;
        let mut signs_seen = [false, false];
        for mask in 0u64..(1u64 << tris.len()) {
            let parity = (mask.count_ones() % 2) as usize;
            for &s in &starts {
                let code = self.traverse(s, mask, &tri_pos, None);
                match &best {
                    Some((b, _, _)) if code > *b => {}
                    Some((b, _, _)) if code == *b => signs_seen[parity] = true,
                    _ => {
                        best = Some((code, mask, s));
                        signs_seen = [false, false];
                        signs_seen[parity] = true;
                    }
                }
            }
        }
        let (code, mask, start) = best.expect("components are nonempty");
        let mut diagram = Diagram::default();
        self.traverse(start, mask, &tri_pos, Some(&mut diagram));
        CanonicalPart {
            code,
            diagram,
            sign: if mask.count_ones() % 2 == 0 { 1 } else { -1 },
            ambiguous: signs_seen[0] && signs_seen[1],
        }
    }

    /// Breadth-first code from a start dart with the given orientation flips.
    /// When `build` is given, also writes the relabeled component into it.
    fn traverse(&self, start: Dart, mask: u64, tri_pos: &[usize], build: Option<&mut Diagram>) -> Vec<u32> {
        let flipped = |v: usize| tri_pos[v] != usize::MAX && (mask >> tri_pos[v]) & 1 == 1;
        // slot reached `i` steps after `entry` in the (possibly reversed) cyclic order
        let rot = |v: usize, entry: u8, i: u8| -> u8 {
            if flipped(v) {
                (entry + 3 - i) % 3
            } else {
                (entry + i) % 3
            }
        };
        let mut label: Vec<u32> = vec![u32::MAX; self.verts.len()];
        let mut entry: Vec<u8> = vec![0; self.verts.len()];
        let mut order: Vec<usize> = vec![start.v as usize];
        label[start.v as usize] = 0;
        entry[start.v as usize] = start.slot;
        let mut queue = VecDeque::from([start.v as usize]);
        let mut code = Vec::new();
        let mut links: Vec<[Dart; 3]> = Vec::new();
        while let Some(v) = queue.pop_front() {
            let deg = self.degree(v) as u8;
            match self.verts[v] {
                Vertex::Leg(c) => code.extend([0, c]),
                Vertex::Tri => code.push(1),
            }
            let mut slots = [UNSET; 3];
            for i in 0..deg {
                let s = if deg == 1 { 0 } else { rot(v, entry[v], i) };
                let o = self.link[v][s as usize];
                let w = o.v as usize;
                if label[w] == u32::MAX {
                    label[w] = order.len() as u32;
                    entry[w] = o.slot;
                    order.push(w);
                    queue.push_back(w);
                }
                let rel = if self.degree(w) == 1 { 0 } else { (0..3).find(|&j| rot(w, entry[w], j) == o.slot).expect("slot") };
                code.extend([label[w], rel as u32]);
                slots[i as usize] = Dart { v: label[w], slot: rel };
            }
            links.push(slots);
        }
        if let Some(out) = build {
            let base = out.verts.len() as u32;
            for &v in &order {
                out.verts.push(self.verts[v]);
            }
            for slots in links {
                out.link.push(slots.map(|d| if d == UNSET { UNSET } else { Dart { v: d.v + base, slot: d.slot } }));
            }
        }
        code
    }

    /// Reverses the cyclic order at a trivalent vertex.
    pub fn flip(&self, v: usize) -> Diagram {
        let mut d = self.clone();
        let (a, b) = (self.link[v][1], self.link[v][2]);
        d.link[v][1] = b;
        d.link[v][2] = a;
        d.link[b.v as usize][b.slot as usize] = Dart::new(v, 1);
        d.link[a.v as usize][a.slot as usize] = Dart::new(v, 2);
        if a.v as usize == v || b.v as usize == v {
            // a self-loop between slots 1 and 2 is unchanged
            d.link[v] = self.link[v];
        }
        d
    }
}

struct CanonicalPart {
    code: Vec<u32>,
    diagram: Diagram,
    sign: i32,
    ambiguous: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn y_rotations_agree() {
        let (a, s, amb) = Diagram::y(0, 1, 2).canonical();
        let (b, t, _) = Diagram::y(1, 2, 0).canonical();
        assert_eq!((a.clone(), s), (b, t));
        assert!(!amb);
        let (c, u, _) = Diagram::y(1, 0, 2).canonical();
        assert_eq!(a, c);
        assert_eq!(s, -u);
    }

    #[test]
    fn repeated_color_is_self_negative() {
        assert!(Diagram::y(0, 0, 1).canonical().2);
    }

    #[test]
    fn flip_negates() {
        let d = Diagram::from_rooted(0, &LieTree::node(LieTree::leaf(1), LieTree::node(LieTree::leaf(2), LieTree::leaf(3))));
        let (c1, s1, _) = d.canonical();
        let (c2, s2, _) = d.flip(1).canonical();
        assert_eq!(c1, c2);
        assert_eq!(s1, -s2);
    }

    #[test]
    fn gluing_struts() {
        let d = Diagram::strut(0, 1).disjoint_union(&Diagram::strut(1, 2));
        // glue the two legs colored 1
        let g = d.glue(&[(1, 2)]);
        assert_eq!(g.canonical().0, Diagram::strut(0, 2).canonical().0);
        // closing a chain gives a circle
        let g = Diagram::strut(0, 1).disjoint_union(&Diagram::strut(0, 1)).glue(&[(0, 2), (1, 3)]);
        assert_eq!(g.verts.len(), 0);
        assert_eq!(g.circles, 1);
        // an open chain 9 — L4 ~ L3 — L2 ~ L1 — 8 whose far end has the
        // smallest index
        let d = Diagram::strut(9, 1).disjoint_union(&Diagram::strut(2, 3)).disjoint_union(&Diagram::strut(4, 8));
        let g = d.glue(&[(3, 1), (4, 2)]);
        assert_eq!(g.circles, 0);
        assert_eq!(g.canonical().0, Diagram::strut(8, 9).canonical().0);
        // the same chain closed up is one circle
        let g = Diagram::strut(0, 1).disjoint_union(&Diagram::strut(2, 3)).disjoint_union(&Diagram::strut(4, 5)).glue(&[(5, 0), (1, 2), (3, 4)]);
        assert_eq!((g.verts.len(), g.circles), (0, 1));
    }

    #[test]
    fn rooted_reading() {
        let y = Diagram::y(0, 1, 2);
        assert_eq!(y.rooted_at(1), Some(LieTree::node(LieTree::leaf(1), LieTree::leaf(2))));
        assert_eq!(y.rooted_at(2), Some(LieTree::node(LieTree::leaf(2), LieTree::leaf(0))));
        assert!(!y.has_loop());
        assert!(y.is_connected_tree());
    }
}
