//! In-place kernels over raw amplitude slices.
//!
//! Index `x` of a slice of length `2^n` is a basis state with qubit 0 in the
//! least significant bit. All kernels here are deterministic for a fixed
//! input: chunk-level parallelism never changes the order of any sum.

use rayon::prelude::*;
use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Range;

/// Slices at least this long are split across the rayon pool.
const PAR_MIN_LEN: usize = 1 << 16;

/// log2 of the working set (in doubles) a blocked pass keeps resident.
const BLOCK_LOG: usize = 15;

/// Widest contiguous run processed per row in a strided butterfly pass.
const MAX_TILE: usize = 64;

fn for_each_chunk<F>(amps: &mut [f64], chunk: usize, work: F)
where
    F: Fn(&mut [f64]) + Sync + Send,
{
    if amps.len() >= PAR_MIN_LEN && chunk < amps.len() {
        amps.par_chunks_exact_mut(chunk).for_each(work);
    } else {
        amps.chunks_exact_mut(chunk).for_each(work);
    }
}

#[inline(always)]
fn butterfly(lo: &mut [f64], hi: &mut [f64]) {
    for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = (x + y) * FRAC_1_SQRT_2;
        *b = (x - y) * FRAC_1_SQRT_2;
    }
}

/// One Hadamard on `qubit`: a single strided butterfly pass.
pub(crate) fn hadamard(amps: &mut [f64], qubit: usize) {
    let half = 1usize << qubit;
    for_each_chunk(amps, 2 * half, |pair| {
        let (lo, hi) = pair.split_at_mut(half);
        butterfly(lo, hi);
    });
}

/// Hadamard on every qubit in `lo..hi`, applied in ascending qubit order.
///
/// Stages are grouped so each group touches a cache-sized working set, which
/// turns `hi - lo` memory passes into roughly `(hi - lo) / 9 + 1`. The
/// floating-point operations per element are exactly those of calling
/// [`hadamard`] once per qubit, so the two paths agree bit for bit.
pub(crate) fn walsh_hadamard_range(amps: &mut [f64], lo: usize, hi: usize) {
    let mut a = lo;
    while a < hi {
        let tile = (1usize << a).min(MAX_TILE);
        let depth = (hi - a).min(BLOCK_LOG - tile.trailing_zeros() as usize);
        let b = a + depth;
        if a == 0 {
            for_each_chunk(amps, 1 << b, |chunk| butterfly_group_contiguous(chunk, b));
        } else {
            for_each_chunk(amps, 1 << b, |chunk| {
                butterfly_group_tiled(chunk, a, b, tile)
            });
        }
        a = b;
    }
}

fn butterfly_group_contiguous(chunk: &mut [f64], depth: usize) {
    let mut q = 0;
    if depth >= 3 {
        for v in chunk.chunks_exact_mut(8) {
            radix8(v.try_into().expect("chunk of 8"));
        }
        q = 3;
    }
    while q < depth {
        let half = 1usize << q;
        if q + 1 < depth {
            for quad in chunk.chunks_exact_mut(4 * half) {
                radix4_rows(quad, half, 0..half);
            }
            q += 2;
        } else {
            for pair in chunk.chunks_exact_mut(2 * half) {
                let (lo, hi) = pair.split_at_mut(half);
                butterfly(lo, hi);
            }
            q += 1;
        }
    }
}

// Stages 0, 1 and 2 on eight contiguous amplitudes, in registers.
#[inline(always)]
fn radix8(v: &mut [f64; 8]) {
    let mut x = *v;
    for half in [1usize, 2, 4] {
        for base in (0..8).step_by(2 * half) {
            for j in base..base + half {
                let (a, b) = (x[j], x[j + half]);
                x[j] = (a + b) * FRAC_1_SQRT_2;
                x[j + half] = (a - b) * FRAC_1_SQRT_2;
            }
        }
    }
    *v = x;
}

// Two consecutive stages (half, then 2 * half) on a block of 4 * half,
// restricted to offsets `cols` within each quarter.
#[inline(always)]
fn radix4_rows(quad: &mut [f64], half: usize, cols: Range<usize>) {
    let (ab, cd) = quad.split_at_mut(2 * half);
    let (a, b) = ab.split_at_mut(half);
    let (c, d) = cd.split_at_mut(half);
    let (a, b, c, d) = (
        &mut a[cols.clone()],
        &mut b[cols.clone()],
        &mut c[cols.clone()],
        &mut d[cols],
    );
    for (((a, b), c), d) in a
        .iter_mut()
        .zip(b.iter_mut())
        .zip(c.iter_mut())
        .zip(d.iter_mut())
    {
        let (a0, b0, c0, d0) = (*a, *b, *c, *d);
        let (a1, b1) = ((a0 + b0) * FRAC_1_SQRT_2, (a0 - b0) * FRAC_1_SQRT_2);
        let (c1, d1) = ((c0 + d0) * FRAC_1_SQRT_2, (c0 - d0) * FRAC_1_SQRT_2);
        *a = (a1 + c1) * FRAC_1_SQRT_2;
        *c = (a1 - c1) * FRAC_1_SQRT_2;
        *b = (b1 + d1) * FRAC_1_SQRT_2;
        *d = (b1 - d1) * FRAC_1_SQRT_2;
    }
}

// Stages a..b on a chunk of length 2^b, one low-bit tile at a time.
fn butterfly_group_tiled(chunk: &mut [f64], a: usize, b: usize, tile: usize) {
    let row_stride = 1usize << a;
    for t0 in (0..row_stride).step_by(tile) {
        let mut q = a;
        while q < b {
            let half = 1usize << q;
            if q + 1 < b {
                for quad in chunk.chunks_exact_mut(4 * half) {
                    for r in (t0..half).step_by(row_stride) {
                        radix4_rows(quad, half, r..r + tile);
                    }
                }
                q += 2;
            } else {
                for pair in chunk.chunks_exact_mut(2 * half) {
                    let (lo, hi) = pair.split_at_mut(half);
                    for r in (t0..half).step_by(row_stride) {
                        butterfly(&mut lo[r..r + tile], &mut hi[r..r + tile]);
                    }
                }
                q += 1;
            }
        }
    }
}

#[inline]
fn next_submask(x: usize, mask: usize) -> usize {
    (x | !mask).wrapping_add(1) & mask
}

/// Negates every amplitude whose index has all bits of `mask` clear.
pub(crate) fn flip_zero(amps: &mut [f64], mask: usize) {
    let free = (amps.len() - 1) & !mask;
    let mut idx = 0usize;
    loop {
        amps[idx] = -amps[idx];
        if idx == free {
            break;
        }
        idx = next_submask(idx, free);
    }
}

/// Reflects each block about its mean, where a block is the set of indices
/// sharing every bit outside `lo..hi`: `x <- 2 * mean(block) - x`.
pub(crate) fn reflect_blocks_contiguous(amps: &mut [f64], lo: usize, hi: usize) {
    let stride = 1usize << lo;
    let block = 1usize << (hi - lo);
    let two_over_block = 2.0 / block as f64;

    if stride == 1 {
        for_each_chunk(amps, block, |chunk| {
            let twice_mean = chunk.iter().sum::<f64>() * two_over_block;
            for x in chunk.iter_mut() {
                *x = twice_mean - *x;
            }
        });
        return;
    }

    let tile = stride.min(1 << BLOCK_LOG);
    for_each_chunk(amps, stride * block, |chunk| {
        let mut sums = vec![0.0f64; tile];
        for t0 in (0..stride).step_by(tile) {
            sums.fill(0.0);
            for row in chunk.chunks_exact(stride) {
                for (s, x) in sums.iter_mut().zip(&row[t0..t0 + tile]) {
                    *s += *x;
                }
            }
            for s in sums.iter_mut() {
                *s *= two_over_block;
            }
            for row in chunk.chunks_exact_mut(stride) {
                for (x, m) in row[t0..t0 + tile].iter_mut().zip(&sums) {
                    *x = *m - *x;
                }
            }
        }
    });
}

/// `x <- x - 2 * mean(x)` over the whole vector.
pub(crate) fn reflect_about_uniform(amps: &mut [f64]) {
    let twice_mean = sum(amps) * 2.0 / amps.len() as f64;
    let chunk = PAR_MIN_LEN.min(amps.len());
    for_each_chunk(amps, chunk, |chunk| {
        for x in chunk.iter_mut() {
            *x -= twice_mean;
        }
    });
}

fn sum(amps: &[f64]) -> f64 {
    if amps.len() >= 2 * PAR_MIN_LEN {
        amps.par_chunks(PAR_MIN_LEN)
            .map(|c| c.iter().sum::<f64>())
            .collect::<Vec<_>>()
            .iter()
            .sum()
    } else {
        amps.iter().sum()
    }
}

/// Same reflection as [`reflect_blocks_contiguous`] for an arbitrary bit mask.
/// Sequential; blocks are enumerated by walking the bits outside `mask`.
pub(crate) fn reflect_blocks_masked(amps: &mut [f64], mask: usize) {
    let free = (amps.len() - 1) & !mask;
    let two_over_block = 2.0 / (1usize << mask.count_ones()) as f64;
    let mut base = 0usize;
    loop {
        let mut sum = 0.0;
        let mut off = 0usize;
        loop {
            sum += amps[base | off];
            if off == mask {
                break;
            }
            off = next_submask(off, mask);
        }
        let twice_mean = sum * two_over_block;
        off = 0;
        loop {
            let i = base | off;
            amps[i] = twice_mean - amps[i];
            if off == mask {
                break;
            }
            off = next_submask(off, mask);
        }
        if base == free {
            break;
        }
        base = next_submask(base, free);
    }
}
