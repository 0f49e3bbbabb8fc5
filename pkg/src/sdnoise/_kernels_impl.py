"""Hot training-loop kernels, written to compile under numba nopython mode
and to run unchanged as plain numpy.  Do not import numba here; the
backend modules wrap these functions.

Both epoch kernels mutate the parameter and velocity arrays in place and
return (mean_epoch_loss, bad_batch_index); bad_batch_index is -1 unless a
batch produced a non-finite loss, in which case the mean is NaN and the
index locates the offending batch.

Loss convention: l(t, q) = u_q g(t) + v_q g(-t) with g the +1 branch of
the base loss (0 = squared, 1 = logistic); the score is t = tanh(z / 2),
so dt/dz = (1 - t^2) / 2.
"""

import numpy as np


def linear_epoch(w, b, vw, vb, X, q, order, u_pos, v_pos, u_neg, v_neg,
                 base_id, lr, mom, batch_size):
    n = order.shape[0]
    total = 0.0
    n_batches = (n + batch_size - 1) // batch_size
    for k in range(n_batches):
        idx = order[k * batch_size:min((k + 1) * batch_size, n)]
        Xb = X[idx]
        qb = q[idx]
        B = Xb.shape[0]
        z = Xb @ w + b[0]
        t = np.tanh(0.5 * z)
        u = np.where(qb > 0, u_pos, u_neg)
        v = np.where(qb > 0, v_pos, v_neg)
        if base_id == 0:
            lv = u * (1.0 - t) ** 2 + v * (1.0 + t) ** 2
            dt = 2.0 * u * (t - 1.0) + 2.0 * v * (t + 1.0)
        else:
            lv = u * np.log1p(np.exp(-t)) + v * np.log1p(np.exp(t))
            dt = -u / (1.0 + np.exp(t)) + v / (1.0 + np.exp(-t))
        bl = lv.sum()
        if not np.isfinite(bl):
            return np.nan, k
        total += bl
        dz = dt * 0.5 * (1.0 - t * t) / B
        gw = Xb.T @ dz
        gb = dz.sum()
        vw *= mom
        vw -= lr * gw
        w += vw
        vb[0] = mom * vb[0] - lr * gb
        b[0] += vb[0]
    return total / n, -1


def mlp_epoch(W1, b1, W2, b2, w3, b3, vW1, vb1, vW2, vb2, vw3, vb3,
              X, q, order, u_pos, v_pos, u_neg, v_neg,
              base_id, lr, mom, batch_size):
    n = order.shape[0]
    total = 0.0
    n_batches = (n + batch_size - 1) // batch_size
    for k in range(n_batches):
        idx = order[k * batch_size:min((k + 1) * batch_size, n)]
        Xb = X[idx]
        qb = q[idx]
        B = Xb.shape[0]
        A1 = Xb @ W1 + b1
        Z1 = np.maximum(A1, 0.0)
        A2 = Z1 @ W2 + b2
        Z2 = np.maximum(A2, 0.0)
        z = Z2 @ w3 + b3[0]
        t = np.tanh(0.5 * z)
        u = np.where(qb > 0, u_pos, u_neg)
        v = np.where(qb > 0, v_pos, v_neg)
        if base_id == 0:
            lv = u * (1.0 - t) ** 2 + v * (1.0 + t) ** 2
            dt = 2.0 * u * (t - 1.0) + 2.0 * v * (t + 1.0)
        else:
            lv = u * np.log1p(np.exp(-t)) + v * np.log1p(np.exp(t))
            dt = -u / (1.0 + np.exp(t)) + v / (1.0 + np.exp(-t))
        bl = lv.sum()
        if not np.isfinite(bl):
            return np.nan, k
        total += bl
        dz = dt * 0.5 * (1.0 - t * t) / B
        gw3 = Z2.T @ dz
        gb3 = dz.sum()
        dZ2 = np.outer(dz, w3)
        dA2 = np.where(A2 > 0.0, dZ2, 0.0)
        gW2 = Z1.T @ dA2
        gb2 = np.sum(dA2, 0)
        dZ1 = dA2 @ W2.T
        dA1 = np.where(A1 > 0.0, dZ1, 0.0)
        gW1 = Xb.T @ dA1
        gb1 = np.sum(dA1, 0)
        vW1 *= mom
        vW1 -= lr * gW1
        W1 += vW1
        vb1 *= mom
        vb1 -= lr * gb1
        b1 += vb1
        vW2 *= mom
        vW2 -= lr * gW2
        W2 += vW2
        vb2 *= mom
        vb2 -= lr * gb2
        b2 += vb2
        vw3 *= mom
        vw3 -= lr * gw3
        w3 += vw3
        vb3[0] = mom * vb3[0] - lr * gb3
        b3[0] += vb3[0]
    return total / n, -1
