use super::Graph;

/// Shell index of every node (Batagelj–Zaversnik bucket peeling, `O(N + |E|)`).
///
/// Works on disconnected graphs; isolated nodes get shell 0.
pub fn k_core_decomposition(g: &Graph) -> Vec<usize> {
    let n = g.n_nodes();
    if n == 0 {
        return Vec::new();
    }
    let mut degree = g.degrees();
    let max_degree = degree.iter().copied().max().unwrap_or(0);

    // bin[d]: start of the degree-d block in `vert`.
    let mut bin = vec![0usize; max_degree + 1];
    for &d in &degree {
        bin[d] += 1;
    }
    let mut start = 0;
    for slot in bin.iter_mut() {
        let count = *slot;
        *slot = start;
        start += count;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    for v in 0..n {
        pos[v] = bin[degree[v]];
        vert[pos[v]] = v;
        bin[degree[v]] += 1;
    }
    for d in (1..=max_degree).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..n {
        let v = vert[i];
        for &u in g.neighbors(v) {
            if degree[u] > degree[v] {
                let du = degree[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    vert.swap(pu, pw);
                    pos[u] = pw;
                    pos[w] = pu;
                }
                bin[du] += 1;
                degree[u] -= 1;
            }
        }
    }
    degree
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_has_shell_one() {
        let g = Graph::from_edge_slice(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(k_core_decomposition(&g), vec![1, 1, 1, 1]);
    }

    #[test]
    fn clique_with_pendant() {
        let mut edges = vec![];
        for u in 0..4 {
            for v in u + 1..4 {
                edges.push((u, v));
            }
        }
        let k4 = Graph::from_edge_slice(4, &edges);
        assert_eq!(k_core_decomposition(&k4), vec![3; 4]);
        edges.push((3, 4));
        let g = Graph::from_edge_slice(5, &edges);
        assert_eq!(k_core_decomposition(&g), vec![3, 3, 3, 3, 1]);
    }

    #[test]
    fn isolated_nodes_and_empty_graph() {
        let g = Graph::from_edge_slice(3, &[(0, 1)]);
        assert_eq!(k_core_decomposition(&g), vec![1, 1, 0]);
        assert!(k_core_decomposition(&Graph::from_edge_slice(0, &[])).is_empty());
    }
}
