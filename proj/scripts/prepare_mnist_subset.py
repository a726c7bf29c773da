#!/usr/bin/env python3
"""Convert the digits bundled with the npm `mnist` package into IDX archives.

The package ships 10,000 MNIST digits as JSON, 784 pixels per image scaled
to [0, 1] with three decimals. Pixel bytes are recovered as round(v * 255).

    npm pack mnist@1.1.0 && tar xzf mnist-1.1.0.tgz
    python3 scripts/prepare_mnist_subset.py package/src/digits data/mnist-10k
"""
import gzip
import json
import struct
import sys
from pathlib import Path


def main(src: Path, dst: Path) -> None:
    images = bytearray()
    labels = bytearray()
    count = 0
    for digit in range(10):
        data = json.loads((src / f"{digit}.json").read_text())["data"]
        if len(data) % 784:
            raise ValueError(f"{digit}.json: {len(data)} values is not a multiple of 784")
        for v in data:
            p = round(v * 255)
            if not 0 <= p <= 255:
                raise ValueError(f"pixel out of range: {v}")
            images.append(p)
        n = len(data) // 784
        labels.extend([digit] * n)
        count += n
    dst.mkdir(parents=True, exist_ok=True)
    with gzip.GzipFile(dst / "images-idx3-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">IIII", 0x00000803, count, 28, 28))
        f.write(images)
    with gzip.GzipFile(dst / "labels-idx1-ubyte.gz", "wb", mtime=0) as f:
        f.write(struct.pack(">II", 0x00000801, count))
        f.write(labels)
    print(f"wrote {count} images to {dst}")


if __name__ == "__main__":
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    main(Path(sys.argv[1]), Path(sys.argv[2]))
