use crate::basis::mean_and_variance;

/// Moment coefficients û[s][i][j] of every state and cell.
///
/// Storage is cell-major: the p·(N+1) coefficients of one cell are
/// contiguous, states first, then orders.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentField {
    states: usize,
    order: usize,
    cells: usize,
    data: Vec<f64>,
}

impl MomentField {
    pub fn zeros(states: usize, order: usize, cells: usize) -> Self {
        Self {
            states,
            order,
            cells,
            data: vec![0.0; states * (order + 1) * cells],
        }
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Length of one cell block, p·(N+1).
    pub fn block(&self) -> usize {
        self.states * (self.order + 1)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn cell(&self, j: usize) -> &[f64] {
        let b = self.block();
        &self.data[j * b..(j + 1) * b]
    }

    pub fn cell_mut(&mut self, j: usize) -> &mut [f64] {
        let b = self.block();
        &mut self.data[j * b..(j + 1) * b]
    }

    /// Coefficients û_s0..û_sN of state `s` in cell `j`.
    pub fn coeffs(&self, s: usize, j: usize) -> &[f64] {
        let size = self.order + 1;
        &self.cell(j)[s * size..(s + 1) * size]
    }

    pub fn get(&self, s: usize, i: usize, j: usize) -> f64 {
        self.coeffs(s, j)[i]
    }

    pub fn set(&mut self, s: usize, i: usize, j: usize, value: f64) {
        let size = self.order + 1;
        self.cell_mut(j)[s * size + i] = value;
    }

    /// (E, Var) of state `s` in cell `j`.
    pub fn mean_and_variance(&self, s: usize, j: usize) -> (f64, f64) {
        mean_and_variance(self.coeffs(s, j))
    }

    pub fn mean(&self, s: usize) -> Vec<f64> {
        (0..self.cells).map(|j| self.get(s, 0, j)).collect()
    }

    pub fn variance(&self, s: usize) -> Vec<f64> {
        (0..self.cells).map(|j| self.mean_and_variance(s, j).1).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}
