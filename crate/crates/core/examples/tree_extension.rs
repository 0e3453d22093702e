//! Extending a map piece by piece along a tree decomposition of a binary tree.
use graph_rigidity::graph::families::binary_tree;
use graph_rigidity::graph::ball;
use graph_rigidity::rigidity::{extend_cover_along_tree, PartialMap, TreeDecomposition, TreeExtension};
use graph_rigidity::Budget;

fn main() -> graph_rigidity::Result<()> {
    let x = binary_tree(4);
    let d = x.bfs(0);
    // piece of u: u and its children
    let pieces = (0..x.n()).map(|u| std::iter::once(u).chain(x.neighbors(u).iter().copied().filter(|&w| d[w] > d[u])).collect()).collect();
    let dec = TreeDecomposition { tree: x.clone(), pieces, r1: 2 };
    let seed: PartialMap = ball(&x, 0, 3)?.ambient.into_iter().map(|v| (v, v)).collect();
    match extend_cover_along_tree(&x, &dec, &x, 0, &seed, 2, 1, None, &mut Budget::default())? {
        TreeExtension::Covering(c) => println!("covering of {} vertices, fiber {:?}", c.map.len(), c.fiber_size),
        other => println!("{other:?}"),
    }
    Ok(())
}
