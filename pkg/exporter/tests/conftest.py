import pytest

torch = pytest.importorskip("torch")
transformers = pytest.importorskip("transformers")

VOCAB = [
    "[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]",
    "the", "a", "good", "day", "time", "people", "music", "water",
    "##s", "##ing", "hello", "world", ".", "!", ",",
]


@pytest.fixture(scope="session")
def tiny_model_dir(tmp_path_factory):
    """A locally constructed miniature encoder so tests need no downloads."""
    from transformers import BertConfig, BertModel, BertTokenizer

    root = tmp_path_factory.mktemp("tiny-model")
    vocab_file = root / "vocab.txt"
    vocab_file.write_text("\n".join(VOCAB) + "\n", encoding="utf-8")
    tokenizer = BertTokenizer(str(vocab_file), model_max_length=16)
    tokenizer.save_pretrained(root)

    torch.manual_seed(1234)
    config = BertConfig(
        vocab_size=len(VOCAB),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=32,
    )
    BertModel(config).save_pretrained(root)
    return str(root)
