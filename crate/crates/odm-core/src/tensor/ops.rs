//! Forward kernels and the matching backward rules, written against plain
//! slices so both the tape and the no-grad inference paths share them.
//! Matrix products go through the gemm kernel; convolutions are expressed
//! as strided gemms per kernel offset.

use super::scalar::Scalar;
use super::tensor::Tensor;
use crate::error::{Error, Result};

// ── gemm wrappers ────────────────────────────────────────────────────

/// c[m,n] = beta*c + a[m,k] · b[k,n]
pub(crate) fn mm_nn<S: Scalar>(a: &[S], b: &[S], c: &mut [S], m: usize, k: usize, n: usize, beta: S) {
    debug_assert!(a.len() >= m * k && b.len() >= k * n && c.len() >= m * n);
    if m == 0 || n == 0 || k == 0 {
        return;
    }
    unsafe {
        S::gemm(
            m, k, n,
            S::one(),
            a.as_ptr(), k as isize, 1,
            b.as_ptr(), n as isize, 1,
            beta,
            c.as_mut_ptr(), n as isize, 1,
        );
    }
}

/// c[m,n] = beta*c + a[m,k] · b[n,k]ᵀ
pub(crate) fn mm_nt<S: Scalar>(a: &[S], b: &[S], c: &mut [S], m: usize, k: usize, n: usize, beta: S) {
    debug_assert!(a.len() >= m * k && b.len() >= n * k && c.len() >= m * n);
    if m == 0 || n == 0 || k == 0 {
        return;
    }
    unsafe {
        S::gemm(
            m, k, n,
            S::one(),
            a.as_ptr(), k as isize, 1,
            b.as_ptr(), 1, k as isize,
            beta,
            c.as_mut_ptr(), n as isize, 1,
        );
    }
}

/// c[m,n] = beta*c + a[k,m]ᵀ · b[k,n]
pub(crate) fn mm_tn<S: Scalar>(a: &[S], b: &[S], c: &mut [S], m: usize, k: usize, n: usize, beta: S) {
    debug_assert!(a.len() >= k * m && b.len() >= k * n && c.len() >= m * n);
    if m == 0 || n == 0 || k == 0 {
        return;
    }
    unsafe {
        S::gemm(
            m, k, n,
            S::one(),
            a.as_ptr(), 1, m as isize,
            b.as_ptr(), n as isize, 1,
            beta,
            c.as_mut_ptr(), n as isize, 1,
        );
    }
}

// ── affine ───────────────────────────────────────────────────────────

/// y = x·Wᵀ + b for x [batch,in] (or [in]), W [out,in], b [out].
pub fn affine<S: Scalar>(x: &Tensor<S>, w: &Tensor<S>, b: &Tensor<S>) -> Result<Tensor<S>> {
    if w.shape().len() != 2 {
        return Err(Error::shape("affine", format!("weight must be a matrix, got {:?}", w.shape())));
    }
    let (out_w, in_w) = (w.shape()[0], w.shape()[1]);
    let (batch, in_x, vector_in) = match x.shape() {
        [n] => (1usize, *n, true),
        [b, n] => (*b, *n, false),
        s => return Err(Error::shape("affine", format!("input must be 1-D or 2-D, got {:?}", s))),
    };
    if in_x != in_w {
        return Err(Error::shape("affine", format!("input width {} vs weight width {}", in_x, in_w)));
    }
    if b.shape() != [out_w] {
        return Err(Error::shape("affine", format!("bias {:?} vs output width {}", b.shape(), out_w)));
    }
    let mut y = vec![S::zero(); batch * out_w];
    mm_nt(x.data(), w.data(), &mut y, batch, in_w, out_w, S::zero());
    for row in y.chunks_exact_mut(out_w) {
        for (v, &bv) in row.iter_mut().zip(b.data()) {
            *v += bv;
        }
    }
    let shape: Vec<usize> = if vector_in { vec![out_w] } else { vec![batch, out_w] };
    let y = Tensor::from_vec(&shape, y).map_err(|_| Error::NonFinite { op: "affine" })?;
    Ok(y)
}

/// Backward of `affine`: returns (dx, dw, db) given upstream dy.
pub(crate) fn affine_backward<S: Scalar>(
    x: &Tensor<S>,
    w: &Tensor<S>,
    dy: &Tensor<S>,
) -> (Tensor<S>, Tensor<S>, Tensor<S>) {
    let (out_w, in_w) = (w.shape()[0], w.shape()[1]);
    let batch = if x.shape().len() == 1 { 1 } else { x.shape()[0] };

    let mut dx = vec![S::zero(); batch * in_w];
    mm_nn(dy.data(), w.data(), &mut dx, batch, out_w, in_w, S::zero());

    let mut dw = vec![S::zero(); out_w * in_w];
    mm_tn(dy.data(), x.data(), &mut dw, out_w, batch, in_w, S::zero());

    let mut db = vec![S::zero(); out_w];
    for row in dy.data().chunks_exact(out_w) {
        for (d, &g) in db.iter_mut().zip(row) {
            *d += g;
        }
    }

    (
        Tensor::from_vec(x.shape(), dx).unwrap(),
        Tensor::from_vec(w.shape(), dw).unwrap(),
        Tensor::from_vec(&[out_w], db).unwrap(),
    )
}

// ── 1-D convolution ──────────────────────────────────────────────────

/// Valid (no padding, stride 1) convolution over time.
/// seq [time,in] or [batch,time,in]; kernels [width,in,out]; bias [out].
/// Output time = time − width + 1.
pub fn conv1d<S: Scalar>(seq: &Tensor<S>, kernels: &Tensor<S>, bias: &Tensor<S>) -> Result<Tensor<S>> {
    if kernels.shape().len() != 3 {
        return Err(Error::shape("conv1d", format!("kernels must be [width,in,out], got {:?}", kernels.shape())));
    }
    let (width, c_in, c_out) = (kernels.shape()[0], kernels.shape()[1], kernels.shape()[2]);
    let (batch, time, ch, batched) = match seq.shape() {
        [t, c] => (1usize, *t, *c, false),
        [b, t, c] => (*b, *t, *c, true),
        s => return Err(Error::shape("conv1d", format!("sequence must be 2-D or 3-D, got {:?}", s))),
    };
    if ch != c_in {
        return Err(Error::shape("conv1d", format!("sequence channels {} vs kernel in {}", ch, c_in)));
    }
    if time < width {
        return Err(Error::invalid("conv1d", format!("sequence length {} shorter than kernel width {}", time, width)));
    }
    if bias.shape() != [c_out] {
        return Err(Error::shape("conv1d", format!("bias {:?} vs out channels {}", bias.shape(), c_out)));
    }
    let t_out = time - width + 1;
    let mut out = vec![S::zero(); batch * t_out * c_out];
    for bi in 0..batch {
        let in_base = bi * time * c_in;
        let out_slice = &mut out[bi * t_out * c_out..(bi + 1) * t_out * c_out];
        for dw in 0..width {
            // rows [dw, dw+t_out) of this batch element form a contiguous
            // [t_out, c_in] view; one gemm per kernel offset.
            let a = &seq.data()[in_base + dw * c_in..in_base + (dw + t_out) * c_in];
            let k = &kernels.data()[dw * c_in * c_out..(dw + 1) * c_in * c_out];
            mm_nn(a, k, out_slice, t_out, c_in, c_out, S::one());
        }
        for row in out_slice.chunks_exact_mut(c_out) {
            for (v, &bv) in row.iter_mut().zip(bias.data()) {
                *v += bv;
            }
        }
    }
    let shape: Vec<usize> =
        if batched { vec![batch, t_out, c_out] } else { vec![t_out, c_out] };
    Tensor::from_vec(&shape, out).map_err(|_| Error::NonFinite { op: "conv1d" })
}

pub(crate) fn conv1d_backward<S: Scalar>(
    seq: &Tensor<S>,
    kernels: &Tensor<S>,
    dy: &Tensor<S>,
) -> (Tensor<S>, Tensor<S>, Tensor<S>) {
    let (width, c_in, c_out) = (kernels.shape()[0], kernels.shape()[1], kernels.shape()[2]);
    let (batch, time) = match seq.shape() {
        [t, _] => (1usize, *t),
        [b, t, _] => (*b, *t),
        _ => unreachable!(),
    };
    let t_out = time - width + 1;

    let mut dseq = vec![S::zero(); seq.numel()];
    let mut dk = vec![S::zero(); kernels.numel()];
    let mut db = vec![S::zero(); c_out];

    for bi in 0..batch {
        let dy_b = &dy.data()[bi * t_out * c_out..(bi + 1) * t_out * c_out];
        let in_base = bi * time * c_in;
        for dw in 0..width {
            let k = &kernels.data()[dw * c_in * c_out..(dw + 1) * c_in * c_out];
            // dseq rows [dw, dw+t_out) += dy · kᵀ
            let ds = &mut dseq[in_base + dw * c_in..in_base + (dw + t_out) * c_in];
            mm_nt(dy_b, k, ds, t_out, c_out, c_in, S::one());
            // dk[dw] += seq_rowsᵀ · dy
            let a = &seq.data()[in_base + dw * c_in..in_base + (dw + t_out) * c_in];
            let dkw = &mut dk[dw * c_in * c_out..(dw + 1) * c_in * c_out];
            mm_tn(a, dy_b, dkw, c_in, t_out, c_out, S::one());
        }
        for row in dy_b.chunks_exact(c_out) {
            for (d, &g) in db.iter_mut().zip(row) {
                *d += g;
            }
        }
    }

    (
        Tensor::from_vec(seq.shape(), dseq).unwrap(),
        Tensor::from_vec(kernels.shape(), dk).unwrap(),
        Tensor::from_vec(&[c_out], db).unwrap(),
    )
}

// ── 2-D convolution (same padding) ───────────────────────────────────

/// Stride-1 convolution with zero same-padding, via im2col + gemm.
/// img [h,w,in] or [batch,h,w,in]; kernels [kh,kw,in,out] with odd kh,kw.
pub fn conv2d_same<S: Scalar>(img: &Tensor<S>, kernels: &Tensor<S>, bias: &Tensor<S>) -> Result<Tensor<S>> {
    if kernels.shape().len() != 4 {
        return Err(Error::shape("conv2d", format!("kernels must be [kh,kw,in,out], got {:?}", kernels.shape())));
    }
    let (kh, kw, c_in, c_out) =
        (kernels.shape()[0], kernels.shape()[1], kernels.shape()[2], kernels.shape()[3]);
    if kh % 2 == 0 || kw % 2 == 0 {
        return Err(Error::invalid("conv2d", "same padding requires odd kernel extents"));
    }
    let (batch, h, w, ch, batched) = match img.shape() {
        [h, w, c] => (1usize, *h, *w, *c, false),
        [b, h, w, c] => (*b, *h, *w, *c, true),
        s => return Err(Error::shape("conv2d", format!("image must be 3-D or 4-D, got {:?}", s))),
    };
    if ch != c_in {
        return Err(Error::shape("conv2d", format!("image channels {} vs kernel in {}", ch, c_in)));
    }
    if bias.shape() != [c_out] {
        return Err(Error::shape("conv2d", format!("bias {:?} vs out channels {}", bias.shape(), c_out)));
    }
    let patch_w = kh * kw * c_in;
    let mut patches = vec![S::zero(); h * w * patch_w];
    let mut out = vec![S::zero(); batch * h * w * c_out];
    for bi in 0..batch {
        im2col(&img.data()[bi * h * w * c_in..], h, w, c_in, kh, kw, &mut patches);
        let out_b = &mut out[bi * h * w * c_out..(bi + 1) * h * w * c_out];
        mm_nn(&patches, kernels.data(), out_b, h * w, patch_w, c_out, S::zero());
        for row in out_b.chunks_exact_mut(c_out) {
            for (v, &bv) in row.iter_mut().zip(bias.data()) {
                *v += bv;
            }
        }
    }
    let shape: Vec<usize> =
        if batched { vec![batch, h, w, c_out] } else { vec![h, w, c_out] };
    Tensor::from_vec(&shape, out).map_err(|_| Error::NonFinite { op: "conv2d" })
}

fn im2col<S: Scalar>(img: &[S], h: usize, w: usize, c_in: usize, kh: usize, kw: usize, patches: &mut [S]) {
    let (ph, pw) = (kh / 2, kw / 2);
    for v in patches.iter_mut() {
        *v = S::zero();
    }
    for y in 0..h {
        for x in 0..w {
            let base = (y * w + x) * kh * kw * c_in;
            for dy in 0..kh {
                let sy = y as isize + dy as isize - ph as isize;
                if sy < 0 || sy >= h as isize {
                    continue;
                }
                for dx in 0..kw {
                    let sx = x as isize + dx as isize - pw as isize;
                    if sx < 0 || sx >= w as isize {
                        continue;
                    }
                    let src = (sy as usize * w + sx as usize) * c_in;
                    let dst = base + (dy * kw + dx) * c_in;
                    patches[dst..dst + c_in].copy_from_slice(&img[src..src + c_in]);
                }
            }
        }
    }
}

pub(crate) fn conv2d_same_backward<S: Scalar>(
    img: &Tensor<S>,
    kernels: &Tensor<S>,
    dy: &Tensor<S>,
) -> (Tensor<S>, Tensor<S>, Tensor<S>) {
    let (kh, kw, c_in, c_out) =
        (kernels.shape()[0], kernels.shape()[1], kernels.shape()[2], kernels.shape()[3]);
    let (batch, h, w) = match img.shape() {
        [h, w, _] => (1usize, *h, *w),
        [b, h, w, _] => (*b, *h, *w),
        _ => unreachable!(),
    };
    let (ph, pw) = (kh / 2, kw / 2);
    let patch_w = kh * kw * c_in;

    let mut dimg = vec![S::zero(); img.numel()];
    let mut dk = vec![S::zero(); kernels.numel()];
    let mut db = vec![S::zero(); c_out];
    let mut patches = vec![S::zero(); h * w * patch_w];
    let mut dpatches = vec![S::zero(); h * w * patch_w];

    for bi in 0..batch {
        let dy_b = &dy.data()[bi * h * w * c_out..(bi + 1) * h * w * c_out];
        im2col(&img.data()[bi * h * w * c_in..], h, w, c_in, kh, kw, &mut patches);
        mm_tn(&patches, dy_b, &mut dk, patch_w, h * w, c_out, S::one());
        mm_nt(dy_b, kernels.data(), &mut dpatches, h * w, c_out, patch_w, S::zero());
        // col2im scatter-add
        let dimg_b = &mut dimg[bi * h * w * c_in..(bi + 1) * h * w * c_in];
        for y in 0..h {
            for x in 0..w {
                let base = (y * w + x) * patch_w;
                for dyk in 0..kh {
                    let sy = y as isize + dyk as isize - ph as isize;
                    if sy < 0 || sy >= h as isize {
                        continue;
                    }
                    for dxk in 0..kw {
                        let sx = x as isize + dxk as isize - pw as isize;
                        if sx < 0 || sx >= w as isize {
                            continue;
                        }
                        let dst = (sy as usize * w + sx as usize) * c_in;
                        let src = base + (dyk * kw + dxk) * c_in;
                        for c in 0..c_in {
                            dimg_b[dst + c] += dpatches[src + c];
                        }
                    }
                }
            }
        }
        for row in dy_b.chunks_exact(c_out) {
            for (d, &g) in db.iter_mut().zip(row) {
                *d += g;
            }
        }
    }

    (
        Tensor::from_vec(img.shape(), dimg).unwrap(),
        Tensor::from_vec(kernels.shape(), dk).unwrap(),
        Tensor::from_vec(&[c_out], db).unwrap(),
    )
}

/// Grouped variant: one kernel set per leading-dim slot.
/// imgs [n,h,w,in]; kernels [n,kh,kw,in,out]; bias [n,out].
pub fn conv2d_grouped<S: Scalar>(
    imgs: &Tensor<S>,
    kernels: &Tensor<S>,
    bias: &Tensor<S>,
) -> Result<Tensor<S>> {
    if imgs.shape().len() != 4 || kernels.shape().len() != 5 || bias.shape().len() != 2 {
        return Err(Error::shape(
            "conv2d_grouped",
            format!("imgs {:?}, kernels {:?}, bias {:?}", imgs.shape(), kernels.shape(), bias.shape()),
        ));
    }
    let (n, h, w, c_in) = (imgs.shape()[0], imgs.shape()[1], imgs.shape()[2], imgs.shape()[3]);
    let (kn, kh, kw, kc_in, c_out) = (
        kernels.shape()[0],
        kernels.shape()[1],
        kernels.shape()[2],
        kernels.shape()[3],
        kernels.shape()[4],
    );
    if kn != n || kc_in != c_in || bias.shape() != [n, c_out] {
        return Err(Error::shape("conv2d_grouped", "slot counts or channels disagree"));
    }
    if kh % 2 == 0 || kw % 2 == 0 {
        return Err(Error::invalid("conv2d_grouped", "same padding requires odd kernel extents"));
    }
    let patch_w = kh * kw * c_in;
    let mut patches = vec![S::zero(); h * w * patch_w];
    let mut out = vec![S::zero(); n * h * w * c_out];
    for s in 0..n {
        im2col(&imgs.data()[s * h * w * c_in..], h, w, c_in, kh, kw, &mut patches);
        let k = &kernels.data()[s * patch_w * c_out..(s + 1) * patch_w * c_out];
        let o = &mut out[s * h * w * c_out..(s + 1) * h * w * c_out];
        mm_nn(&patches, k, o, h * w, patch_w, c_out, S::zero());
        let b = &bias.data()[s * c_out..(s + 1) * c_out];
        for row in o.chunks_exact_mut(c_out) {
            for (v, &bv) in row.iter_mut().zip(b) {
                *v += bv;
            }
        }
    }
    Tensor::from_vec(&[n, h, w, c_out], out).map_err(|_| Error::NonFinite { op: "conv2d_grouped" })
}

pub(crate) fn conv2d_grouped_backward<S: Scalar>(
    imgs: &Tensor<S>,
    kernels: &Tensor<S>,
    dy: &Tensor<S>,
) -> (Tensor<S>, Tensor<S>, Tensor<S>) {
    let (n, h, w, c_in) = (imgs.shape()[0], imgs.shape()[1], imgs.shape()[2], imgs.shape()[3]);
    let (kh, kw, c_out) = (kernels.shape()[1], kernels.shape()[2], kernels.shape()[4]);
    let (ph, pw) = (kh / 2, kw / 2);
    let patch_w = kh * kw * c_in;

    let mut dimg = vec![S::zero(); imgs.numel()];
    let mut dk = vec![S::zero(); kernels.numel()];
    let mut db = vec![S::zero(); n * c_out];
    let mut patches = vec![S::zero(); h * w * patch_w];
    let mut dpatches = vec![S::zero(); h * w * patch_w];

    for s in 0..n {
        let dy_s = &dy.data()[s * h * w * c_out..(s + 1) * h * w * c_out];
        im2col(&imgs.data()[s * h * w * c_in..], h, w, c_in, kh, kw, &mut patches);
        let dk_s = &mut dk[s * patch_w * c_out..(s + 1) * patch_w * c_out];
        mm_tn(&patches, dy_s, dk_s, patch_w, h * w, c_out, S::zero());
        let k = &kernels.data()[s * patch_w * c_out..(s + 1) * patch_w * c_out];
        mm_nt(dy_s, k, &mut dpatches, h * w, c_out, patch_w, S::zero());
        let dimg_s = &mut dimg[s * h * w * c_in..(s + 1) * h * w * c_in];
        for y in 0..h {
            for x in 0..w {
                let base = (y * w + x) * patch_w;
                for dyk in 0..kh {
                    let sy = y as isize + dyk as isize - ph as isize;
                    if sy < 0 || sy >= h as isize {
                        continue;
                    }
                    for dxk in 0..kw {
                        let sx = x as isize + dxk as isize - pw as isize;
                        if sx < 0 || sx >= w as isize {
                            continue;
                        }
                        let dst = (sy as usize * w + sx as usize) * c_in;
                        let src = base + (dyk * kw + dxk) * c_in;
                        for c in 0..c_in {
                            dimg_s[dst + c] += dpatches[src + c];
                        }
                    }
                }
            }
        }
        let db_s = &mut db[s * c_out..(s + 1) * c_out];
        for row in dy_s.chunks_exact(c_out) {
            for (d, &g) in db_s.iter_mut().zip(row) {
                *d += g;
            }
        }
    }

    (
        Tensor::from_vec(imgs.shape(), dimg).unwrap(),
        Tensor::from_vec(kernels.shape(), dk).unwrap(),
        Tensor::from_vec(&[n, c_out], db).unwrap(),
    )
}

// ── global max pooling over time ─────────────────────────────────────

/// Per-channel max over the time axis. Ties resolve to the earliest time
/// index so the gradient route is deterministic.
/// seq [time,ch] -> [ch]; [batch,time,ch] -> [batch,ch].
pub fn global_max_pool<S: Scalar>(seq: &Tensor<S>) -> Result<(Tensor<S>, Vec<usize>)> {
    let (batch, time, ch, batched) = match seq.shape() {
        [t, c] => (1usize, *t, *c, false),
        [b, t, c] => (*b, *t, *c, true),
        s => return Err(Error::shape("global_max_pool", format!("need [time,ch] or [batch,time,ch], got {:?}", s))),
    };
    if time == 0 {
        return Err(Error::invalid("global_max_pool", "empty time axis"));
    }
    let mut out = vec![S::zero(); batch * ch];
    let mut argmax = vec![0usize; batch * ch];
    for bi in 0..batch {
        let base = bi * time * ch;
        for c in 0..ch {
            let mut best = seq.data()[base + c];
            let mut best_t = 0usize;
            for t in 1..time {
                let v = seq.data()[base + t * ch + c];
                if v > best {
                    best = v;
                    best_t = t;
                }
            }
            out[bi * ch + c] = best;
            argmax[bi * ch + c] = best_t;
        }
    }
    let shape: Vec<usize> = if batched { vec![batch, ch] } else { vec![ch] };
    Ok((Tensor::from_vec(&shape, out)?, argmax))
}

// ── activations ──────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Sigmoid,
    Tanh,
    Relu,
    Identity,
}

impl Activation {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "sigmoid" => Ok(Activation::Sigmoid),
            "tanh" => Ok(Activation::Tanh),
            "relu" => Ok(Activation::Relu),
            "identity" => Ok(Activation::Identity),
            other => Err(Error::invalid("activation", format!("unknown nonlinearity '{}'", other))),
        }
    }
}

impl std::fmt::Display for Activation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Activation::Sigmoid => "sigmoid",
            Activation::Tanh => "tanh",
            Activation::Relu => "relu",
            Activation::Identity => "identity",
        };
        f.write_str(s)
    }
}

pub fn sigmoid<S: Scalar>(x: S) -> S {
    S::one() / (S::one() + (-x).exp())
}

pub fn activation<S: Scalar>(x: &Tensor<S>, kind: Activation) -> Tensor<S> {
    match kind {
        Activation::Sigmoid => x.map(sigmoid),
        Activation::Tanh => x.map(|v| v.tanh()),
        Activation::Relu => x.map(|v| if v > S::zero() { v } else { S::zero() }),
        Activation::Identity => x.clone(),
    }
}

/// dx given the activation input, its output and upstream dy.
pub(crate) fn activation_backward<S: Scalar>(
    x: &Tensor<S>,
    y: &Tensor<S>,
    dy: &Tensor<S>,
    kind: Activation,
) -> Tensor<S> {
    match kind {
        Activation::Sigmoid => {
            y.zip(dy, "sigmoid_bwd", |s, g| g * s * (S::one() - s)).unwrap()
        }
        Activation::Tanh => y.zip(dy, "tanh_bwd", |t, g| g * (S::one() - t * t)).unwrap(),
        Activation::Relu => {
            x.zip(dy, "relu_bwd", |v, g| if v > S::zero() { g } else { S::zero() }).unwrap()
        }
        Activation::Identity => dy.clone(),
    }
}

// ── losses ───────────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossKind {
    /// Plain sum of squared differences, no 1/2 factor.
    Squared,
    /// Elementwise binary cross-entropy on logits, summed.
    SigmoidXent,
    /// −Σ target·log softmax(pred), rows summed.
    SoftmaxXent,
}

impl LossKind {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "squared" => Ok(LossKind::Squared),
            "sigmoid-xent" => Ok(LossKind::SigmoidXent),
            "softmax-xent" => Ok(LossKind::SoftmaxXent),
            other => Err(Error::invalid("loss", format!("unknown loss '{}'", other))),
        }
    }
}

pub fn squared_loss<S: Scalar>(pred: &Tensor<S>, target: &Tensor<S>) -> Result<S> {
    if pred.shape() != target.shape() {
        return Err(Error::shape("squared_loss", format!("{:?} vs {:?}", pred.shape(), target.shape())));
    }
    let mut acc = S::zero();
    for (&p, &t) in pred.data().iter().zip(target.data()) {
        let d = p - t;
        acc += d * d;
    }
    Ok(acc)
}

/// Stable sum of max(z,0) − z·t + ln(1 + e^(−|z|)) over all elements.
pub fn sigmoid_xent_loss<S: Scalar>(pred: &Tensor<S>, target: &Tensor<S>) -> Result<S> {
    if pred.shape() != target.shape() {
        return Err(Error::shape("sigmoid_xent", format!("{:?} vs {:?}", pred.shape(), target.shape())));
    }
    let mut acc = S::zero();
    for (&z, &t) in pred.data().iter().zip(target.data()) {
        let pos = if z > S::zero() { z } else { S::zero() };
        acc += pos - z * t + (S::one() + (-z.abs()).exp()).ln();
    }
    Ok(acc)
}

/// Sum of squared differences per leading-dim slot: [n, rest…] -> [n].
pub fn squared_loss_rows<S: Scalar>(pred: &Tensor<S>, target: &Tensor<S>) -> Result<Tensor<S>> {
    if pred.shape() != target.shape() {
        return Err(Error::shape("squared_rows", format!("{:?} vs {:?}", pred.shape(), target.shape())));
    }
    let n = pred.shape()[0];
    let per = pred.numel() / n;
    let mut out = vec![S::zero(); n];
    for (s, (pr, tr)) in
        pred.data().chunks_exact(per).zip(target.data().chunks_exact(per)).enumerate()
    {
        let mut acc = S::zero();
        for (&p, &t) in pr.iter().zip(tr) {
            let d = p - t;
            acc += d * d;
        }
        out[s] = acc;
    }
    Tensor::from_vec(&[n], out)
}

/// Elementwise binary cross-entropy on logits, summed per leading-dim slot.
pub fn sigmoid_xent_rows<S: Scalar>(pred: &Tensor<S>, target: &Tensor<S>) -> Result<Tensor<S>> {
    if pred.shape() != target.shape() {
        return Err(Error::shape("sigmoid_xent_rows", format!("{:?} vs {:?}", pred.shape(), target.shape())));
    }
    let n = pred.shape()[0];
    let per = pred.numel() / n;
    let mut out = vec![S::zero(); n];
    for (s, (pr, tr)) in
        pred.data().chunks_exact(per).zip(target.data().chunks_exact(per)).enumerate()
    {
        let mut acc = S::zero();
        for (&z, &t) in pr.iter().zip(tr) {
            let pos = if z > S::zero() { z } else { S::zero() };
            acc += pos - z * t + (S::one() + (-z.abs()).exp()).ln();
        }
        out[s] = acc;
    }
    Tensor::from_vec(&[n], out)
}

/// Row-wise softmax of a [rows, cols] tensor (or a single row).
pub fn softmax_rows<S: Scalar>(logits: &Tensor<S>) -> Tensor<S> {
    let cols = logits.cols();
    let mut out = logits.data().to_vec();
    for row in out.chunks_exact_mut(cols) {
        let mut max = row[0];
        for &v in row.iter() {
            if v > max {
                max = v;
            }
        }
        let mut sum = S::zero();
        for v in row.iter_mut() {
            *v = (*v - max).exp();
            sum += *v;
        }
        for v in row.iter_mut() {
            *v /= sum;
        }
    }
    Tensor::from_vec(logits.shape(), out).unwrap()
}

/// Validates that every target row is a distribution, then returns
/// (loss, softmax(pred)) with the softmax kept for the backward pass.
pub fn softmax_xent_loss<S: Scalar>(pred: &Tensor<S>, target: &Tensor<S>) -> Result<(S, Tensor<S>)> {
    if pred.shape() != target.shape() {
        return Err(Error::shape("softmax_xent", format!("{:?} vs {:?}", pred.shape(), target.shape())));
    }
    let cols = pred.cols();
    let tol = S::from_f64(1e-4);
    for row in target.data().chunks_exact(cols) {
        let mut sum = S::zero();
        for &t in row {
            if t < S::zero() {
                return Err(Error::invalid("softmax_xent", "negative target probability"));
            }
            sum += t;
        }
        if (sum - S::one()).abs() > tol {
            return Err(Error::invalid(
                "softmax_xent",
                format!("target row sums to {}, not 1", sum),
            ));
        }
    }
    let sm = softmax_rows(pred);
    let mut loss = S::zero();
    let tiny = S::from_f64(1e-45);
    for (&q, &t) in sm.data().iter().zip(target.data()) {
        if t > S::zero() {
            loss -= t * (q + tiny).ln();
        }
    }
    Ok((loss, sm))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t2(shape: &[usize], v: &[f64]) -> Tensor<f64> {
        Tensor::from_vec(shape, v.to_vec()).unwrap()
    }

    #[test]
    fn affine_identity_passes_input_through() {
        let w = t2(&[2, 2], &[1.0, 0.0, 0.0, 1.0]);
        let b = t2(&[2], &[0.0, 0.0]);
        let x = t2(&[2], &[3.5, -1.25]);
        let y = affine(&x, &w, &b).unwrap();
        assert_eq!(y.data(), x.data());
    }

    #[test]
    fn affine_hand_computed_product() {
        let w = t2(&[2, 2], &[1.0, 2.0, 3.0, 4.0]);
        let b = t2(&[2], &[0.0, 0.0]);
        let x = t2(&[2], &[1.0, 1.0]);
        let y = affine(&x, &w, &b).unwrap();
        assert_eq!(y.data(), &[3.0, 7.0]);
    }

    #[test]
    fn affine_rejects_dimension_mismatch() {
        let w = t2(&[2, 3], &[0.0; 6]);
        let b = t2(&[2], &[0.0; 2]);
        let x = t2(&[2], &[0.0; 2]);
        assert!(affine(&x, &w, &b).is_err());
    }

    #[test]
    fn conv1d_output_length_is_time_minus_width_plus_one() {
        let seq = Tensor::<f64>::zeros(&[20, 3]);
        let k = Tensor::<f64>::zeros(&[7, 3, 5]);
        let b = Tensor::<f64>::zeros(&[5]);
        let y = conv1d(&seq, &k, &b).unwrap();
        assert_eq!(y.shape(), &[14, 5]);
        assert!(y.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn conv1d_width_one_identity_kernel() {
        let seq = t2(&[4, 1], &[1.0, -2.0, 3.0, 0.5]);
        let k = t2(&[1, 1, 1], &[1.0]);
        let b = t2(&[1], &[0.0]);
        let y = conv1d(&seq, &k, &b).unwrap();
        assert_eq!(y.data(), seq.data());
    }

    #[test]
    fn conv1d_rejects_short_sequence() {
        let seq = Tensor::<f64>::zeros(&[3, 2]);
        let k = Tensor::<f64>::zeros(&[7, 2, 4]);
        let b = Tensor::<f64>::zeros(&[4]);
        assert!(conv1d(&seq, &k, &b).is_err());
    }

    #[test]
    fn max_pool_takes_per_channel_max_first_on_ties() {
        let seq = t2(&[3, 2], &[1.0, 7.0, 5.0, 7.0, 3.0, 2.0]);
        let (y, argmax) = global_max_pool(&seq).unwrap();
        assert_eq!(y.data(), &[5.0, 7.0]);
        assert_eq!(argmax, &[1, 0]);
    }

    #[test]
    fn activation_reference_values() {
        let x = t2(&[3], &[0.0, 1.0, -3.0]);
        let s = activation(&x, Activation::Sigmoid);
        assert!((s.data()[0] - 0.5).abs() < 1e-12);
        assert!((s.data()[1] - 0.731058578630).abs() < 1e-6);
        let th = activation(&x, Activation::Tanh);
        assert_eq!(th.data()[0], 0.0);
        let r = activation(&x, Activation::Relu);
        assert_eq!(r.data()[2], 0.0);
        let id = activation(&x, Activation::Identity);
        assert_eq!(id.data(), x.data());
    }

    #[test]
    fn squared_loss_conventions() {
        let p = t2(&[2], &[1.0, 0.0]);
        let q = t2(&[2], &[0.0, 1.0]);
        assert_eq!(squared_loss(&p, &p).unwrap(), 0.0);
        assert_eq!(squared_loss(&p, &q).unwrap(), 2.0);
    }

    #[test]
    fn softmax_xent_uniform_case_is_log_v() {
        for v in [3usize, 10, 100] {
            let logits = Tensor::<f64>::zeros(&[1, v]);
            let target = Tensor::<f64>::filled(&[1, v], 1.0 / v as f64);
            let (loss, _) = softmax_xent_loss(&logits, &target).unwrap();
            assert!((loss - (v as f64).ln()).abs() < 1e-9, "v={}", v);
        }
    }

    #[test]
    fn softmax_xent_rejects_bad_target() {
        let logits = Tensor::<f64>::zeros(&[1, 3]);
        let bad = t2(&[1, 3], &[0.5, 0.6, 0.2]);
        assert!(softmax_xent_loss(&logits, &bad).is_err());
        let neg = t2(&[1, 3], &[-0.1, 0.6, 0.5]);
        assert!(softmax_xent_loss(&logits, &neg).is_err());
    }

    #[test]
    fn softmax_xent_lower_bounded_by_target_entropy() {
        // Gibbs: xent(p, t) >= H(t), equality iff softmax(p) == t.
        let target = t2(&[1, 4], &[0.4, 0.3, 0.2, 0.1]);
        let entropy: f64 = -target.data().iter().map(|&t| t * t.ln()).sum::<f64>();
        // Matching logits: log t (softmax recovers t exactly).
        let matching = t2(&[1, 4], &[0.4f64.ln(), 0.3f64.ln(), 0.2f64.ln(), 0.1f64.ln()]);
        let (loss_eq, _) = softmax_xent_loss(&matching, &target).unwrap();
        assert!((loss_eq - entropy).abs() < 1e-9);
        // Any other logits strictly exceed the entropy.
        let off = t2(&[1, 4], &[0.1, 0.2, 0.3, 0.4]);
        let (loss_off, _) = softmax_xent_loss(&off, &target).unwrap();
        assert!(loss_off > entropy + 1e-6);
    }

    #[test]
    fn sigmoid_xent_at_zero_logits_is_ln2_per_element() {
        let z = Tensor::<f64>::zeros(&[4]);
        let t = Tensor::<f64>::filled(&[4], 0.5);
        let loss = sigmoid_xent_loss(&z, &t).unwrap();
        assert!((loss - 4.0 * 2.0f64.ln()).abs() < 1e-12);
    }
}
