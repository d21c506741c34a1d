use crate::instance::Instance;

/// Remaining capacity `A[t][r]` for slots `1 ..= T`, kept between SSGS
/// executions so that only the used prefix has to be restored.
///
/// Each resource owns one contiguous row of slots. Slot 0 exists only as
/// padding so that slot numbers index rows directly; it always holds the
/// full capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvailabilityProfile {
    capacities: Vec<u32>,
    horizon: u32,
    stride: usize,
    cells: Vec<u32>,
}

impl AvailabilityProfile {
    pub fn new(capacities: &[u32], horizon: u32) -> Self {
        let stride = horizon as usize + 1;
        let mut cells = Vec::with_capacity(stride * capacities.len());
        for &c in capacities {
            cells.extend(std::iter::repeat_n(c, stride));
        }
        AvailabilityProfile {
            capacities: capacities.to_vec(),
            horizon,
            stride,
            cells,
        }
    }

    pub fn for_instance(instance: &Instance) -> Self {
        Self::new(instance.capacities(), instance.horizon())
    }

    #[inline]
    pub fn horizon(&self) -> u32 {
        self.horizon
    }

    #[inline]
    pub fn num_resources(&self) -> usize {
        self.capacities.len()
    }

    #[inline]
    pub fn capacities(&self) -> &[u32] {
        &self.capacities
    }

    #[inline]
    pub fn get(&self, slot: u32, resource: usize) -> u32 {
        self.cells[resource * self.stride + slot as usize]
    }

    /// Row of resource `r`, indexed by slot number (`row[0]` is padding).
    #[inline]
    pub fn row(&self, resource: usize) -> &[u32] {
        let start = resource * self.stride;
        &self.cells[start..start + self.stride]
    }

    #[inline]
    pub fn row_mut(&mut self, resource: usize) -> &mut [u32] {
        let start = resource * self.stride;
        &mut self.cells[start..start + self.stride]
    }

    /// Availability of every resource in one slot.
    pub fn column(&self, slot: u32) -> Vec<u32> {
        (0..self.num_resources())
            .map(|r| self.get(slot, r))
            .collect()
    }

    /// Subtracts `amount` from slots `start .. start + duration` of one resource.
    #[inline]
    pub fn consume(&mut self, resource: usize, start: u32, duration: u32, amount: u32) {
        let row = self.row_mut(resource);
        for cell in &mut row[start as usize..(start + duration) as usize] {
            debug_assert!(*cell >= amount, "availability would go negative");
            *cell -= amount;
        }
    }

    /// Resets slots `1 ..= makespan` to full capacity and returns the number
    /// of cells written.
    pub fn restore(&mut self, makespan: u32) -> usize {
        let m = makespan.min(self.horizon) as usize;
        if m == 0 {
            return 0;
        }
        for (r, &c) in self.capacities.iter().enumerate() {
            let start = r * self.stride;
            self.cells[start + 1..=start + m].fill(c);
        }
        m * self.capacities.len()
    }

    /// Whether every cell holds its resource's full capacity.
    pub fn is_pristine(&self) -> bool {
        self.capacities
            .iter()
            .enumerate()
            .all(|(r, &c)| self.row(r).iter().all(|&a| a == c))
    }
}
