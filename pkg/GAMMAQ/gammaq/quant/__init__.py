# quantization package
