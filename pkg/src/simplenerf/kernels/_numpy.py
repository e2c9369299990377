"""Pure-numpy implementations of the hot kernels.

Reference semantics for the numba twins in ``_numba.py``; selected at import
time by the ``SIMPLENERF_NUMBA`` environment flag (see ``__init__``).
All arrays are float64, C-contiguous. Image coordinates handed to
``bilinear_rgb`` are in index space (pixel (i, j) sits at coordinate (i, j));
camera-facing kernels use the pixel-center convention internally and shift
by 0.5 before sampling.
"""

import numpy as np


def weights_forward(sigmas, deltas):
    """Compositing weights w_i = T_i * (1 - exp(-delta_i * sigma_i)).

    T_i is the transmittance prod_{j<i} exp(-delta_j * sigma_j).

    sigmas, deltas: (n_rays, n_samples)
    returns (weights, trans), both (n_rays, n_samples)
    """
    att = np.exp(-deltas * sigmas)                      # exp(-delta_i sigma_i)
    trans = np.ones_like(att)
    np.cumprod(att[:, :-1], axis=1, out=trans[:, 1:])
    weights = trans * (1.0 - att)
    return weights, trans


def weights_backward(sigmas, deltas, weights, trans, d_weights):
    """Adjoint of weights_forward w.r.t. sigmas.

    d sigma_k = delta_k * (dw_k * (T_k - w_k) - sum_{i>k} dw_i * w_i)
    """
    c = d_weights * weights
    # suffix[k] = sum_{i>k} c_i
    suffix = np.zeros_like(c)
    np.cumsum(c[:, :0:-1], axis=1, out=suffix[:, -2::-1])
    return deltas * (d_weights * (trans - weights) - suffix)


def sample_pdf_uniform_bins(weights, near, far, u, mass_floor=1e-5):
    """Inverse-CDF draws from the piecewise-constant pdf over the N
    equal-width bins of [near, far] with per-bin mass weights[i].

    Bins carrying exactly zero weight receive no draws. When the total mass
    of a row does not exceed ``mass_floor`` the row falls back to uniform
    draws over [near, far].

    weights: (n_rays, n_bins)    u: (n_rays, n_draws) in [0, 1)
    returns samples (n_rays, n_draws), unsorted
    """
    w = np.maximum(weights, 0.0)
    total = w.sum(axis=1)
    h = (far - near) / w.shape[1]
    cdf = np.cumsum(w, axis=1)

    samples = near + u * (far - near)  # uniform fallback, overwritten below
    live = total > mass_floor
    if np.any(live):
        target = u[live] * total[live, None]
        idx = np.empty_like(target, dtype=np.int64)
        for r, row in enumerate(np.nonzero(live)[0]):
            idx[r] = np.searchsorted(cdf[row], target[r], side="right")
        idx = np.minimum(idx, w.shape[1] - 1)
        cdf_lo = np.take_along_axis(
            np.concatenate([np.zeros((cdf.shape[0], 1)), cdf], axis=1)[live],
            idx, axis=1)
        mass = np.take_along_axis(w[live], idx, axis=1)
        frac = np.where(mass > 0.0, (target - cdf_lo) / np.where(mass > 0.0, mass, 1.0), 0.0)
        frac = np.clip(frac, 0.0, 1.0)
        samples[live] = near + (idx + frac) * h
    return samples


def bilinear_rgb(image, x, y):
    """Bilinear interpolation of an (H, W, 3) image at index-space coords.

    A sample is invalid when any of its four neighbours falls outside the
    image; invalid entries return zeros with valid=False.
    """
    H, W = image.shape[0], image.shape[1]
    x0 = np.floor(x).astype(np.int64)
    y0 = np.floor(y).astype(np.int64)
    valid = (x0 >= 0) & (x0 + 1 <= W - 1) & (y0 >= 0) & (y0 + 1 <= H - 1)
    x0c = np.clip(x0, 0, W - 2)
    y0c = np.clip(y0, 0, H - 2)
    fx = x - x0c
    fy = y - y0c
    c00 = image[y0c, x0c]
    c01 = image[y0c, x0c + 1]
    c10 = image[y0c + 1, x0c]
    c11 = image[y0c + 1, x0c + 1]
    top = c00 * (1.0 - fx)[:, None] + c01 * fx[:, None]
    bot = c10 * (1.0 - fx)[:, None] + c11 * fx[:, None]
    out = top * (1.0 - fy)[:, None] + bot * fy[:, None]
    out[~valid] = 0.0
    return out, valid


def patch_mse(src_img, dst_img, src_k, src_rot, src_center,
              dst_k, dst_rot, dst_center, qx, qy, z, k):
    """Reprojection MSE of the k x k patch around each query pixel.

    Every patch pixel is cast as its own ray from the source camera, placed
    at the shared along-ray distance z of its query, reprojected into the
    destination camera and bilinearly sampled there. MSE is the mean over
    valid patch pixels and RGB channels against the source-image patch.
    ok=False when more than half the patch pixels are invalid or z <= 0.

    src_k/dst_k: (fx, fy, cx, cy, width, height) float64 arrays
    qx, qy: (n,) int64 query pixel indices;  z: (n,) along-ray distances
    returns (mse (n,), ok (n,))
    """
    n = qx.shape[0]
    r = k // 2
    offs = np.arange(-r, r + 1, dtype=np.int64)
    dxs, dys = np.meshgrid(offs, offs)                 # (k, k)
    sx = qx[:, None] + dxs.ravel()[None, :]            # (n, k*k)
    sy = qy[:, None] + dys.ravel()[None, :]
    sw, sh = int(src_k[4]), int(src_k[5])
    in_src = (sx >= 0) & (sx < sw) & (sy >= 0) & (sy < sh)

    # ray through each patch pixel centre, scaled to the shared distance
    px = sx + 0.5
    py = sy + 0.5
    dcx = (px - src_k[2]) / src_k[0]
    dcy = (py - src_k[3]) / src_k[1]
    norm = np.sqrt(dcx * dcx + dcy * dcy + 1.0)
    dirs_cam = np.stack([dcx / norm, dcy / norm, 1.0 / norm], axis=-1)  # (n, k*k, 3)
    dirs = dirs_cam @ src_rot.T
    pts = src_center[None, None, :] + z[:, None, None] * dirs

    rel = pts - dst_center[None, None, :]
    cam = rel @ dst_rot                                 # R^T applied from the right
    front = cam[..., 2] > 0.0
    zc = np.where(front, cam[..., 2], 1.0)
    u = dst_k[0] * cam[..., 0] / zc + dst_k[2]
    v = dst_k[1] * cam[..., 1] / zc + dst_k[3]

    flat_u = (u - 0.5).ravel()
    flat_v = (v - 0.5).ravel()
    dst_rgb, samp_ok = bilinear_rgb(dst_img, flat_u, flat_v)
    dst_rgb = dst_rgb.reshape(n, k * k, 3)
    samp_ok = samp_ok.reshape(n, k * k)

    good = in_src & front & samp_ok & (z > 0.0)[:, None]
    sxc = np.clip(sx, 0, sw - 1)
    syc = np.clip(sy, 0, sh - 1)
    src_rgb = src_img[syc, sxc]
    err = ((dst_rgb - src_rgb) ** 2).mean(axis=2)
    err = np.where(good, err, 0.0)

    n_good = good.sum(axis=1)
    invalid = k * k - n_good
    ok = (invalid <= (k * k) // 2) & (z > 0.0)
    mse = np.where(n_good > 0, err.sum(axis=1) / np.maximum(n_good, 1), 0.0)
    return mse, ok


def splat_depth(depth, valid, src_k, src_rot, src_center,
                dst_k, dst_rot, dst_center, out_h, out_w):
    """Forward-splat a source depth map into the destination view.

    Each valid source pixel is lifted to 3D at its along-ray depth and
    projected into the destination camera; the destination along-ray
    distance lands on the nearest pixel with z-min conflict resolution.
    Holes are +inf.
    """
    H, W = depth.shape
    jj, ii = np.meshgrid(np.arange(H), np.arange(W), indexing="ij")
    m = valid & np.isfinite(depth) & (depth > 0.0)
    px = ii[m] + 0.5
    py = jj[m] + 0.5
    zs = depth[m]

    dcx = (px - src_k[2]) / src_k[0]
    dcy = (py - src_k[3]) / src_k[1]
    norm = np.sqrt(dcx * dcx + dcy * dcy + 1.0)
    dirs = np.stack([dcx / norm, dcy / norm, 1.0 / norm], axis=-1) @ src_rot.T
    pts = src_center[None, :] + zs[:, None] * dirs

    rel = pts - dst_center[None, :]
    cam = rel @ dst_rot
    front = cam[:, 2] > 0.0
    cam = cam[front]
    dist = np.sqrt((cam * cam).sum(axis=1))
    u = dst_k[0] * cam[:, 0] / cam[:, 2] + dst_k[2]
    v = dst_k[1] * cam[:, 1] / cam[:, 2] + dst_k[3]
    ix = np.floor(u).astype(np.int64)
    iy = np.floor(v).astype(np.int64)
    inb = (ix >= 0) & (ix < out_w) & (iy >= 0) & (iy < out_h)

    warped = np.full((out_h, out_w), np.inf)
    np.minimum.at(warped, (iy[inb], ix[inb]), dist[inb])
    return warped
