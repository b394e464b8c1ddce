#!/usr/bin/env python3
# Copyright (c) 2026 The Herd Authors. All Rights Reserved.
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
"""Train the small CNN-LSTM behavior classifier used as a test fixture.

The training data follows the same five signal families as the C++
synthetic generator (core/src/synthetic.cpp); only the random streams differ,
so the C++ tests evaluate the weights on windows they never saw.

    python3 tools/train_behavior_fixture.py --out tests/fixtures/behavior_classifier.herd
"""

import argparse
import math
import struct

import numpy as np
import torch
from torch import nn

RATE_HZ = 25
WINDOW = 250

# (offset xyz, amplitude xyz, frequency Hz) per class: RES, MOV, ATT, FES, GRZ.
FAMILIES = [
    ((0.0, 0.0, 1.0), (0.02, 0.02, 0.02), 0.2),
    ((0.1, 0.0, 0.95), (0.30, 0.10, 0.15), 1.5),
    ((0.2, 0.2, 0.8), (0.80, 0.50, 0.40), 2.5),
    ((0.0, 0.7, 0.7), (0.05, 0.10, 0.05), 0.5),
    ((0.3, 0.5, 0.75), (0.15, 0.05, 0.10), 1.0),
]
OFFSET_JITTER = 0.05
NOISE = 0.05

# Layer tags and tensor ids of the HERD weight file (docs/weight_format.md).
CONV1D, FC, RELU, MAX_POOL, SOFTMAX, LSTM = 4, 5, 6, 9, 10, 11
T_WEIGHT, T_BIAS, T_RECURRENT = 0, 1, 2
USE_BIAS, RETURN_SEQUENCES = 1, 2


def draw_window(rng, label):
    off, amp, freq = FAMILIES[label]
    off = np.array(off) + rng.normal(0.0, OFFSET_JITTER, 3)
    amp = np.array(amp) * rng.uniform(0.8, 1.2, 3)
    phase = rng.uniform(0.0, 2.0 * math.pi, 3)
    f = freq * rng.uniform(0.9, 1.1)
    t = np.arange(WINDOW)[:, None] / RATE_HZ
    x = off + amp * np.sin(2.0 * math.pi * f * t + phase) + rng.normal(0.0, NOISE, (WINDOW, 3))
    return x.astype(np.float32)


def dataset(per_class, seed):
    rng = np.random.default_rng(seed)
    xs, ys = [], []
    for _ in range(per_class):
        for c in range(len(FAMILIES)):
            xs.append(draw_window(rng, c))
            ys.append(c)
    return torch.tensor(np.stack(xs)), torch.tensor(ys)


class Net(nn.Module):
    def __init__(self):
        super().__init__()
        self.conv1 = nn.Conv1d(3, 8, 5, padding=2)
        self.conv2 = nn.Conv1d(8, 16, 5, padding=2)
        self.pool = nn.MaxPool1d(5, 5)
        self.lstm = nn.LSTM(16, 16, batch_first=True)
        self.fc = nn.Linear(16, 5)

    def forward(self, x):  # x: [N, T, 3]
        x = x.transpose(1, 2)
        x = self.pool(torch.relu(self.conv1(x)))
        x = self.pool(torch.relu(self.conv2(x)))
        _, (h, _) = self.lstm(x.transpose(1, 2))
        return self.fc(h[-1])


class Writer:
    def __init__(self):
        self.buf = bytearray()

    def put(self, fmt, *v):
        self.buf += struct.pack("<" + fmt, *v)

    def tensor(self, tid, arr):
        arr = np.ascontiguousarray(arr, dtype=np.float32)
        self.put("BB", tid, arr.ndim)
        for d in arr.shape:
            self.put("I", d)
        self.buf += arr.astype("<f4").tobytes()

    def layer(self, kind, fields=(0, 0, 1, 1, 0, 0, 1, USE_BIAS), tensors=()):
        self.put("BB", kind, 0)
        self.put("8I", *fields)
        self.put("B", len(tensors))
        for tid, arr in tensors:
            self.tensor(tid, arr)
        self.put("B", 0)


def export(net, path):
    w = Writer()
    w.buf += b"HERD"
    w.put("HH", 1, 9)
    w.put("BII", 2, WINDOW, 3)
    w.put("B", 0)
    np_ = lambda t: t.detach().cpu().numpy()
    for conv in (net.conv1, net.conv2):
        cout, cin, k = conv.weight.shape
        # torch stores [out, in, k]; the engine wants [out, k, in].
        w.layer(CONV1D, (cin, cout, k, 1, k // 2, 0, 1, USE_BIAS),
                [(T_WEIGHT, np_(conv.weight).transpose(0, 2, 1)), (T_BIAS, np_(conv.bias))])
        w.layer(RELU)
        w.layer(MAX_POOL, (0, 0, 5, 5, 0, 0, 1, USE_BIAS))
    h = net.lstm.hidden_size
    w.layer(LSTM, (16, h, 1, 1, 0, h, 1, USE_BIAS),
            [(T_WEIGHT, np_(net.lstm.weight_ih_l0)),
             (T_RECURRENT, np_(net.lstm.weight_hh_l0)),
             # One bias per gate row in the engine; torch keeps two.
             (T_BIAS, np_(net.lstm.bias_ih_l0) + np_(net.lstm.bias_hh_l0))])
    w.layer(FC, (16, 5, 1, 1, 0, 0, 1, USE_BIAS),
            [(T_WEIGHT, np_(net.fc.weight)), (T_BIAS, np_(net.fc.bias))])
    w.layer(SOFTMAX)
    with open(path, "wb") as f:
        f.write(w.buf)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="tests/fixtures/behavior_classifier.herd")
    ap.add_argument("--seed", type=int, default=2026)
    ap.add_argument("--epochs", type=int, default=60)
    args = ap.parse_args()

    torch.manual_seed(args.seed)
    x, y = dataset(200, args.seed)
    xv, yv = dataset(40, args.seed + 1)
    net = Net()
    opt = torch.optim.Adam(net.parameters(), lr=3e-3)
    loss_fn = nn.CrossEntropyLoss()
    for epoch in range(args.epochs):
        perm = torch.randperm(len(x))
        for i in range(0, len(x), 50):
            idx = perm[i:i + 50]
            opt.zero_grad()
            loss = loss_fn(net(x[idx]), y[idx])
            loss.backward()
            opt.step()
        with torch.no_grad():
            acc = (net(xv).argmax(1) == yv).float().mean().item()
        print(f"epoch {epoch:3d} loss {loss.item():.4f} val acc {acc:.4f}")
    export(net, args.out)
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
