"""Numba-jitted twins of the kernels in ``_numpy.py``.

Same signatures and semantics; explicit loops instead of vectorized
numpy. fastmath stays off so results are reproducible run to run.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def weights_forward(sigmas, deltas):
    n_rays, n_samples = sigmas.shape
    weights = np.empty((n_rays, n_samples))
    trans = np.empty((n_rays, n_samples))
    for r in range(n_rays):
        t = 1.0
        for i in range(n_samples):
            trans[r, i] = t
            att = np.exp(-deltas[r, i] * sigmas[r, i])
            weights[r, i] = t * (1.0 - att)
            t *= att
    return weights, trans


@njit(cache=True)
def weights_backward(sigmas, deltas, weights, trans, d_weights):
    n_rays, n_samples = sigmas.shape
    d_sigmas = np.empty((n_rays, n_samples))
    for r in range(n_rays):
        suffix = 0.0
        for i in range(n_samples - 1, -1, -1):
            dw = d_weights[r, i]
            d_sigmas[r, i] = deltas[r, i] * (dw * (trans[r, i] - weights[r, i]) - suffix)
            suffix += dw * weights[r, i]
    return d_sigmas


@njit(cache=True)
def sample_pdf_uniform_bins(weights, near, far, u, mass_floor=1e-5):
    n_rays, n_bins = weights.shape
    n_draws = u.shape[1]
    h = (far - near) / n_bins
    samples = np.empty((n_rays, n_draws))
    for r in range(n_rays):
        total = 0.0
        for i in range(n_bins):
            if weights[r, i] > 0.0:
                total += weights[r, i]
        if total <= mass_floor:
            for m in range(n_draws):
                samples[r, m] = near + u[r, m] * (far - near)
            continue
        for m in range(n_draws):
            target = u[r, m] * total
            acc = 0.0
            j = n_bins - 1
            frac = 1.0
            for i in range(n_bins):
                w = weights[r, i] if weights[r, i] > 0.0 else 0.0
                if acc + w > target:
                    j = i
                    frac = (target - acc) / w if w > 0.0 else 0.0
                    break
                acc += w
            if frac > 1.0:
                frac = 1.0
            samples[r, m] = near + (j + frac) * h
    return samples


@njit(cache=True)
def bilinear_rgb(image, x, y):
    H, W = image.shape[0], image.shape[1]
    n = x.shape[0]
    out = np.zeros((n, 3))
    valid = np.empty(n, dtype=np.bool_)
    for i in range(n):
        x0 = int(np.floor(x[i]))
        y0 = int(np.floor(y[i]))
        if x0 < 0 or x0 + 1 > W - 1 or y0 < 0 or y0 + 1 > H - 1:
            valid[i] = False
            continue
        valid[i] = True
        fx = x[i] - x0
        fy = y[i] - y0
        for c in range(3):
            top = image[y0, x0, c] * (1.0 - fx) + image[y0, x0 + 1, c] * fx
            bot = image[y0 + 1, x0, c] * (1.0 - fx) + image[y0 + 1, x0 + 1, c] * fx
            out[i, c] = top * (1.0 - fy) + bot * fy
    return out, valid


@njit(cache=True)
def patch_mse(src_img, dst_img, src_k, src_rot, src_center,
              dst_k, dst_rot, dst_center, qx, qy, z, k):
    n = qx.shape[0]
    r = k // 2
    sw = int(src_k[4])
    sh = int(src_k[5])
    dw = int(dst_k[4])
    dh = int(dst_k[5])
    mse = np.zeros(n)
    ok = np.empty(n, dtype=np.bool_)
    for q in range(n):
        if z[q] <= 0.0:
            ok[q] = False
            continue
        n_good = 0
        acc = 0.0
        for dy in range(-r, r + 1):
            for dx in range(-r, r + 1):
                sx = qx[q] + dx
                sy = qy[q] + dy
                if sx < 0 or sx >= sw or sy < 0 or sy >= sh:
                    continue
                dcx = (sx + 0.5 - src_k[2]) / src_k[0]
                dcy = (sy + 0.5 - src_k[3]) / src_k[1]
                norm = np.sqrt(dcx * dcx + dcy * dcy + 1.0)
                wx = (src_rot[0, 0] * dcx + src_rot[0, 1] * dcy + src_rot[0, 2]) / norm
                wy = (src_rot[1, 0] * dcx + src_rot[1, 1] * dcy + src_rot[1, 2]) / norm
                wz = (src_rot[2, 0] * dcx + src_rot[2, 1] * dcy + src_rot[2, 2]) / norm
                ptx = src_center[0] + z[q] * wx
                pty = src_center[1] + z[q] * wy
                ptz = src_center[2] + z[q] * wz
                rx = ptx - dst_center[0]
                ry = pty - dst_center[1]
                rz = ptz - dst_center[2]
                cx_ = dst_rot[0, 0] * rx + dst_rot[1, 0] * ry + dst_rot[2, 0] * rz
                cy_ = dst_rot[0, 1] * rx + dst_rot[1, 1] * ry + dst_rot[2, 1] * rz
                cz_ = dst_rot[0, 2] * rx + dst_rot[1, 2] * ry + dst_rot[2, 2] * rz
                if cz_ <= 0.0:
                    continue
                u = dst_k[0] * cx_ / cz_ + dst_k[2] - 0.5
                v = dst_k[1] * cy_ / cz_ + dst_k[3] - 0.5
                x0 = int(np.floor(u))
                y0 = int(np.floor(v))
                if x0 < 0 or x0 + 1 > dw - 1 or y0 < 0 or y0 + 1 > dh - 1:
                    continue
                fx = u - x0
                fy = v - y0
                e = 0.0
                for c in range(3):
                    top = dst_img[y0, x0, c] * (1.0 - fx) + dst_img[y0, x0 + 1, c] * fx
                    bot = dst_img[y0 + 1, x0, c] * (1.0 - fx) + dst_img[y0 + 1, x0 + 1, c] * fx
                    d = top * (1.0 - fy) + bot * fy - src_img[sy, sx, c]
                    e += d * d
                acc += e / 3.0
                n_good += 1
        invalid = k * k - n_good
        ok[q] = invalid <= (k * k) // 2
        mse[q] = acc / n_good if n_good > 0 else 0.0
    return mse, ok


@njit(cache=True)
def splat_depth(depth, valid, src_k, src_rot, src_center,
                dst_k, dst_rot, dst_center, out_h, out_w):
    H, W = depth.shape
    warped = np.full((out_h, out_w), np.inf)
    for j in range(H):
        for i in range(W):
            if not valid[j, i]:
                continue
            z = depth[j, i]
            if not np.isfinite(z) or z <= 0.0:
                continue
            dcx = (i + 0.5 - src_k[2]) / src_k[0]
            dcy = (j + 0.5 - src_k[3]) / src_k[1]
            norm = np.sqrt(dcx * dcx + dcy * dcy + 1.0)
            wx = (src_rot[0, 0] * dcx + src_rot[0, 1] * dcy + src_rot[0, 2]) / norm
            wy = (src_rot[1, 0] * dcx + src_rot[1, 1] * dcy + src_rot[1, 2]) / norm
            wz = (src_rot[2, 0] * dcx + src_rot[2, 1] * dcy + src_rot[2, 2]) / norm
            rx = src_center[0] + z * wx - dst_center[0]
            ry = src_center[1] + z * wy - dst_center[1]
            rz = src_center[2] + z * wz - dst_center[2]
            cx_ = dst_rot[0, 0] * rx + dst_rot[1, 0] * ry + dst_rot[2, 0] * rz
            cy_ = dst_rot[0, 1] * rx + dst_rot[1, 1] * ry + dst_rot[2, 1] * rz
            cz_ = dst_rot[0, 2] * rx + dst_rot[1, 2] * ry + dst_rot[2, 2] * rz
            if cz_ <= 0.0:
                continue
            dist = np.sqrt(cx_ * cx_ + cy_ * cy_ + cz_ * cz_)
            ix = int(np.floor(dst_k[0] * cx_ / cz_ + dst_k[2]))
            iy = int(np.floor(dst_k[1] * cy_ / cz_ + dst_k[3]))
            if 0 <= ix < out_w and 0 <= iy < out_h:
                if dist < warped[iy, ix]:
                    warped[iy, ix] = dist
    return warped
