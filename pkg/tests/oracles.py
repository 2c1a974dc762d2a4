"""Independent brute-force references. Plain Python only; no cbrw kernels."""
import math

T1 = (0.01 * 255) ** 2
T2 = (0.03 * 255) ** 2


def walk_target(row, col, steps, height, width):
    """Hop one pixel at a time along rows, wrapping at the image corners."""
    for _ in range(abs(steps)):
        if steps > 0:
            col += 1
            if col == width:
                col = 0
                row += 1
                if row == height:
                    row = 0
        else:
            col -= 1
            if col < 0:
                col = width - 1
                row -= 1
                if row < 0:
                    row = height - 1
    return row, col


def rwm_oracle(secret, offsets):
    """secret, offsets: lists of rows. Returns R_w as lists of rows."""
    height, width = len(secret), len(secret[0])
    out = [[0] * width for _ in range(height)]
    for i in range(height):
        for j in range(width):
            ti, tj = walk_target(i, j, offsets[i][j], height, width)
            out[i][j] = (secret[i][j] + secret[ti][tj]) % 256
    return out


def _plane_metrics(a, b):
    h, w = len(a), len(a[0])
    n = h * w
    sq = ab = cnt = 0.0
    for i in range(h):
        for j in range(w):
            d = a[i][j] - b[i][j]
            sq += d * d
            ab += abs(d)
            cnt += d != 0
    mu_a = sum(sum(r) for r in a) / n
    mu_b = sum(sum(r) for r in b) / n
    var_a = var_b = cov = 0.0
    for i in range(h):
        for j in range(w):
            var_a += (a[i][j] - mu_a) ** 2
            var_b += (b[i][j] - mu_b) ** 2
            cov += (a[i][j] - mu_a) * (b[i][j] - mu_b)
    cr = 0.0 if var_a == 0 or var_b == 0 else cov / math.sqrt(var_a * var_b)
    var_a, var_b, cov = var_a / n, var_b / n, cov / n
    ssim = ((2 * mu_a * mu_b + T1) * (2 * cov + T2)) / ((mu_a**2 + mu_b**2 + T1) * (var_a + var_b + T2))
    return {"mse": sq / n, "mae": ab / n, "npcr": 100.0 * cnt / n, "cr": cr, "ssim": ssim}


def metrics_oracle(a_planes, b_planes):
    """a_planes, b_planes: lists of channels, each a list of rows."""
    per = [_plane_metrics(a, b) for a, b in zip(a_planes, b_planes)]
    k = len(per)
    out = {name: sum(p[name] for p in per) / k for name in per[0]}
    out["rmse"] = math.sqrt(out["mse"])
    out["psnr"] = math.inf if out["mse"] == 0 else 20 * math.log10(255 / out["rmse"])
    out["uaci"] = 100.0 * out["mae"] / 255
    return out
