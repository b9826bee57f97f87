#!/usr/bin/env python3
# Copyright 2026 The Microshift Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Builds data/test (512x512 gray PGM) and data/train (256x256 gray crops).

Test images come from package artifacts that bundle the classic test
pictures; training crops come from unrelated photos shipped with
scikit-image, scikit-learn and matplotlib, so the two sets are disjoint.

  prepare_data.py --lena-js lena.js --baboon baboon.png \
      --sporco-wheel sporco.whl --pywt-wheel pywavelets.whl [--out data]
"""
import argparse
import base64
import io
import os
import re
import zipfile

import numpy as np
from PIL import Image

TEST_SIZE = 512
CROP = 256
CROPS_PER_IMAGE = 4


def luma(rgb):
    rgb = np.asarray(rgb, dtype=np.float64)
    if rgb.ndim == 2:
        return rgb
    return rgb[..., 0] * 0.299 + rgb[..., 1] * 0.587 + rgb[..., 2] * 0.114


def to_u8(x):
    return np.clip(np.floor(np.asarray(x, dtype=np.float64) + 0.5), 0, 255).astype(np.uint8)


def square_512(gray):
    gray = to_u8(gray)
    h, w = gray.shape
    s = min(h, w)
    top, left = (h - s) // 2, (w - s) // 2
    gray = gray[top:top + s, left:left + s]
    if s != TEST_SIZE:
        gray = np.asarray(Image.fromarray(gray).resize((TEST_SIZE, TEST_SIZE), Image.LANCZOS))
    return gray


def write_pgm(path, gray):
    gray = np.ascontiguousarray(gray, dtype=np.uint8)
    with open(path, "wb") as f:
        f.write(b"P5\n%d %d\n255\n" % (gray.shape[1], gray.shape[0]))
        f.write(gray.tobytes())


def lena_from_js(path):
    text = open(path).read()
    payload = re.search(r"base64decode\(\s*'([^']+)'", text).group(1)
    raw = np.frombuffer(base64.b64decode(payload), dtype=np.uint8)
    # The buffer runs down columns first: strides (3, 1536, 1) over (x, y, c).
    return raw.reshape(512, 512, 3).transpose(1, 0, 2)


def wheel_png(wheel, member):
    with zipfile.ZipFile(wheel) as z:
        return np.asarray(Image.open(io.BytesIO(z.read(member))).convert("RGB"))


def wheel_npz(wheel, member):
    with zipfile.ZipFile(wheel) as z:
        return np.load(io.BytesIO(z.read(member)))["data"]


def training_sources():
    import matplotlib
    import skimage
    import sklearn

    sk = os.path.join(os.path.dirname(skimage.__file__), "data")
    names = ["coffee.png", "chelsea.png", "brick.png", "grass.png", "gravel.png",
             "retina.jpg", "hubble_deep_field.jpg", "rocket.jpg", "coins.png",
             "page.png", "motorcycle_left.png", "motorcycle_right.png", "ihc.png",
             "moon.png", "cell.png", "color.png", "clock_motion.png", "text.png"]
    paths = [os.path.join(sk, n) for n in names]
    paths.append(os.path.join(os.path.dirname(sklearn.__file__), "datasets", "images", "china.jpg"))
    paths.append(os.path.join(os.path.dirname(sklearn.__file__), "datasets", "images", "flower.jpg"))
    paths.append(os.path.join(matplotlib.get_data_path(), "sample_data", "grace_hopper.jpg"))
    return [p for p in paths if os.path.exists(p)]


def crops(gray, count):
    h, w = gray.shape
    if h < CROP or w < CROP:
        gray = np.asarray(Image.fromarray(gray).resize((max(w, CROP), max(h, CROP)), Image.LANCZOS))
        h, w = gray.shape
    spots = [(0, 0), (h - CROP, w - CROP), (0, w - CROP), (h - CROP, 0),
             ((h - CROP) // 2, (w - CROP) // 2)]
    out, seen = [], set()
    for r, c in spots:
        if (r, c) in seen:
            continue
        seen.add((r, c))
        out.append(gray[r:r + CROP, c:c + CROP])
        if len(out) == count:
            break
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--lena-js", required=True)
    ap.add_argument("--baboon", required=True)
    ap.add_argument("--sporco-wheel", required=True)
    ap.add_argument("--pywt-wheel", required=True)
    ap.add_argument("--out", default=os.path.join(os.path.dirname(__file__), "..", "data"))
    args = ap.parse_args()

    test_dir = os.path.join(args.out, "test")
    train_dir = os.path.join(args.out, "train")
    os.makedirs(test_dir, exist_ok=True)
    os.makedirs(train_dir, exist_ok=True)

    import skimage.data

    tests = {
        "lena": luma(lena_from_js(args.lena_js)),
        "baboon": luma(Image.open(args.baboon).convert("RGB")),
        "cameraman": skimage.data.camera(),
        "astronaut": luma(skimage.data.astronaut()),
        "ascent": wheel_npz(args.pywt_wheel, "pywt/data/ascent.npz"),
        "aero": wheel_npz(args.pywt_wheel, "pywt/data/aero.npz"),
    }
    for name in ["barbara", "kodim23", "monarch", "sail", "tulips"]:
        tests[name] = luma(wheel_png(args.sporco_wheel, "sporco/data/%s.png" % name))
    for name, img in sorted(tests.items()):
        write_pgm(os.path.join(test_dir, name + ".pgm"), square_512(img))

    n = 0
    for path in training_sources():
        gray = to_u8(luma(Image.open(path).convert("RGB")))
        stem = os.path.splitext(os.path.basename(path))[0]
        for i, crop in enumerate(crops(gray, CROPS_PER_IMAGE)):
            write_pgm(os.path.join(train_dir, "%s_%d.pgm" % (stem, i)), crop)
            n += 1
    print("test images: %d, training crops: %d" % (len(tests), n))


if __name__ == "__main__":
    main()
