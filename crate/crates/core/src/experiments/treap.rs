//! A minimal rotation-based treap, used only as a depth baseline.

use std::cmp::Ordering;

struct Node {
    key: u64,
    priority: u64,
    left: Option<Box<Node>>,
    right: Option<Box<Node>>,
}

/// Max-heap ordered by priority, symmetric order by key.
#[derive(Default)]
pub struct Treap {
    root: Option<Box<Node>>,
    len: usize,
}

impl Treap {
    pub fn new() -> Treap {
        Treap::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Leaf insertion followed by rotations up to heap order. Returns false
    /// if the key was present.
    pub fn insert(&mut self, key: u64, priority: u64) -> bool {
        let (root, added) = insert(self.root.take(), key, priority);
        self.root = Some(root);
        self.len += added as usize;
        added
    }

    pub fn depths(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len);
        let mut stack: Vec<(&Node, usize)> = self.root.as_deref().map(|n| (n, 0)).into_iter().collect();
        while let Some((n, d)) = stack.pop() {
            out.push(d);
            for c in [n.left.as_deref(), n.right.as_deref()].into_iter().flatten() {
                stack.push((c, d + 1));
            }
        }
        out
    }

    /// Symmetric order and heap order hold everywhere.
    pub fn is_valid(&self) -> bool {
        fn check(n: Option<&Node>, lo: Option<u64>, hi: Option<u64>) -> bool {
            let Some(n) = n else { return true };
            lo.is_none_or(|lo| n.key > lo)
                && hi.is_none_or(|hi| n.key < hi)
                && [n.left.as_deref(), n.right.as_deref()]
                    .into_iter()
                    .flatten()
                    .all(|c| c.priority < n.priority)
                && check(n.left.as_deref(), lo, Some(n.key))
                && check(n.right.as_deref(), Some(n.key), hi)
        }
        check(self.root.as_deref(), None, None)
    }
}

fn insert(root: Option<Box<Node>>, key: u64, priority: u64) -> (Box<Node>, bool) {
    let Some(mut n) = root else {
        return (
            Box::new(Node {
                key,
                priority,
                left: None,
                right: None,
            }),
            true,
        );
    };
    match key.cmp(&n.key) {
        Ordering::Equal => (n, false),
        Ordering::Less => {
            let (child, added) = insert(n.left.take(), key, priority);
            let rotate = child.priority > n.priority;
            n.left = Some(child);
            (if rotate { rotate_right(n) } else { n }, added)
        }
        Ordering::Greater => {
            let (child, added) = insert(n.right.take(), key, priority);
            let rotate = child.priority > n.priority;
            n.right = Some(child);
            (if rotate { rotate_left(n) } else { n }, added)
        }
    }
}

fn rotate_right(mut n: Box<Node>) -> Box<Node> {
    let mut l = n.left.take().expect("rotation needs a left child");
    n.left = l.right.take();
    l.right = Some(n);
    l
}

fn rotate_left(mut n: Box<Node>) -> Box<Node> {
    let mut r = n.right.take().expect("rotation needs a right child");
    n.right = r.left.take();
    r.left = Some(n);
    r
}

impl Drop for Treap {
    fn drop(&mut self) {
        let mut stack: Vec<Box<Node>> = self.root.take().into_iter().collect();
        while let Some(mut n) = stack.pop() {
            stack.extend(n.left.take());
            stack.extend(n.right.take());
        }
    }
}
