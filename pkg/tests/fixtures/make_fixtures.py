"""Regenerates the committed fixture files. Run from this directory."""

import json
import random
from pathlib import Path

HERE = Path(__file__).parent

WORDS_ID = ("dan yang di ke ini itu untuk dengan pada adalah kami mereka rumah makan nasi "
            "pagi sore hari besar kecil air laut gunung kota desa jalan buku anak guru "
            "sekolah belajar kerja sawah padi ikan ayam bunga putih merah biru").split()
WORDS_EN = ("the and of is in to for with on this that house water school children "
            "teacher work city village road book morning evening day big small sea "
            "mountain rice flower white red blue learn").split()
WORDS_JV = ("lan sing ing iki iku kanggo karo omah mangan sekul esuk sore dina gedhe "
            "cilik banyu segara gunung kutha desa dalan buku bocah guru sekolah sinau "
            "nyambut gawe sawah pari iwak pitik kembang putih abang biru").split()
WORDS_SU = ("jeung nu di ka ieu eta pikeun sareng imah dahar sangu isuk sonten dinten "
            "ageung alit cai laut gunung kota desa jalan buku budak guru sakola diajar "
            "damel sawah pare lauk hayam kembang bodas beureum biru").split()
WORDS_AC = ("ngon nyang bak u nyoe nyan keu deungon rumoh pajoh bu beungoh seupot uroe "
            "rayeuk ubit ie laot gunong banda gampong rot kitab aneuk gure sikula "
            "meurunoe buet blang pade eungkot manok bungong puteh mirah biru").split()
WORDS_BA = ("lan sane ring ka puniki punika antuk sareng umah ngajeng nasi semeng sanja "
            "rahina ageng alit toya segara gunung kota desa margi buku alit-alit guru "
            "sekolah melajah makarya carik padi ulam siap bunga putih barak pelung").split()


def sentences(rng, words, n_sentences, lo=6, hi=10):
    out = []
    for _ in range(n_sentences):
        k = rng.randint(lo, hi)
        sentence = " ".join(rng.choice(words) for _ in range(k))
        out.append(sentence.capitalize() + ".")
    return " ".join(out)


def make_corpus():
    rng = random.Random(919)
    docs = []
    pools = [("indonesian", WORDS_ID, 5), ("english", WORDS_EN, 3), ("javanese", WORDS_JV, 2),
             ("sundanese", WORDS_SU, 2), ("acehnese", WORDS_AC, 1), ("balinese", WORDS_BA, 1)]
    i = 0
    for lang, words, count in pools:
        for _ in range(count):
            i += 1
            docs.append({
                "id": f"d{i:02d}",
                "text": sentences(rng, words, 5),
                "lang": lang,
                "source": "fixture",
            })
    # Planted exact duplicate of d01 (case and spacing vary, normalized-equal).
    docs.append({"id": "d_exact_dup", "text": docs[0]["text"].upper().replace(". ", ".  "),
                 "lang": "indonesian", "source": "fixture"})
    # Planted near duplicate of d02: replace one word near the end.
    words02 = docs[1]["text"].split()
    words02[-3] = "berubah"
    docs.append({"id": "d_near_dup", "text": " ".join(words02),
                 "lang": "indonesian", "source": "fixture"})
    with open(HERE / "corpus.jsonl", "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps(doc, ensure_ascii=False) + "\n")


def make_tasks():
    tasks_dir = HERE / "tasks"
    tasks_dir.mkdir(exist_ok=True)
    judge_entries = []

    def dump(name, rows):
        with open(tasks_dir / f"{name}.jsonl", "w", encoding="utf-8") as fh:
            for row in rows:
                fh.write(json.dumps(row, ensure_ascii=False) + "\n")

    dump("indommlu", [
        {"Input": "Ibu kota Indonesia?", "Output": "a", "answer": "a",
         "Options": "a. Jakarta b. Bandung"},
        {"Input": "Warna bendera?", "Output": "B.", "answer": "b",
         "Options": "a. Biru b. Merah"},
        {"Input": "Pulau terbesar?", "Output": "c. Kalimantan", "answer": "c",
         "Options": "a. Jawa b. Sumatra c. Kalimantan"},
        {"Input": "Lagu kebangsaan?", "Output": "jawabannya adalah a", "answer": "a",
         "Options": "a. Indonesia Raya b. Garuda"},
        {"Input": "Mata uang?", "Output": "d", "answer": "b",
         "Options": "a. Ringgit b. Rupiah"},
        {"Input": "Bahasa resmi?", "Output": "tentu saja opsi b", "answer": "b",
         "Options": "a. Melayu b. Indonesia"},
    ])
    judge_entries += [
        {"template": "mcq_correctness",
         "key": ["a. Indonesia Raya b. Garuda", "jawabannya adalah a", "a"],
         "response": "Yes"},
        {"template": "mcq_correctness",
         "key": ["a. Melayu b. Indonesia", "tentu saja opsi b", "b"],
         "response": "No"},
    ]

    dump("id_en", [
        {"Input": "p1", "Output": "entails", "Output_Mapped": "1", "answer": "1"},
        {"Input": "p2", "Output": "not entail", "Output_Mapped": "0", "answer": "1"},
        {"Input": "p3", "Output": "entails", "Output_Mapped": "1", "answer": "1"},
        {"Input": "p4", "Output": "kalimat ini berhubungan", "Output_Mapped": "entails",
         "answer": "1"},
        {"Input": "p5", "Output": "no", "Output_Mapped": "0", "answer": "0"},
    ])
    judge_entries += [
        {"template": "equality", "key": ["entails", "1"], "response": "Yes"},
    ]

    refusal = "Saya tidak dapat menemukan jawaban atas pertanyaan yang diajukan."
    dump("xcopa_id", [
        {"Input": "k1", "Output": "Air akan tumpah ke lantai.", "answer": "tumpah"},
        {"Input": "k2", "Output": refusal, "answer": "pecah"},
        {"Input": "k3", "Output": "Gelasnya retak.", "answer": "pecah"},
        {"Input": "k4", "Output": "Lampu menyala terang.", "answer": "menyala"},
    ])
    judge_entries += [
        {"template": "containment", "key": ["Gelasnya retak.", "pecah"], "response": "Yes"},
    ]

    dump("tydiqa_id", [
        {"Input": "q1", "Output": "Kemerdekaan diproklamasikan tahun 1945.",
         "answer": "1945"},
        {"Input": "q2", "Output": refusal, "answer": "Soekarno"},
        {"Input": "q3", "Output": "Presiden pertama ialah Bung Karno.",
         "answer": "Soekarno"},
        {"Input": "q4", "Output": "Ibu kota berada di Jakarta.", "answer": "jakarta"},
    ])
    judge_entries += [
        {"template": "containment",
         "key": ["Presiden pertama ialah Bung Karno.", "Soekarno"], "response": "No"},
    ]

    dump("intent", [
        {"Input": "u1", "Output": "declined transfer karena saldo kurang",
         "answer": "declined transfer"},
        {"Input": "u2", "Output": "sepertinya automatic top up", "answer": "automatic top up"},
        {"Input": "u3", "Output": "declined card payment dan declined transfer",
         "answer": "tidak ada"},
        {"Input": "u4", "Output": "halo kak", "answer": "tidak ada"},
        {"Input": "u5", "Output": "edit personal details", "answer": "edit personal details"},
        {"Input": "u6", "Output": "balance not updated after cheque or cash deposit",
         "answer": "balance not updated after cheque or cash deposit"},
    ])

    dump("colloquial", [
        {"Input": "c1", "Output": "This is everyday language.", "answer": "0"},
        {"Input": "c2", "Output": "colloquial", "answer": "1"},
        {"Input": "c3", "Output": "The sentence is conversational.", "answer": "1"},
        {"Input": "c4", "Output": "quite ceremonial wording", "answer": "0"},
        {"Input": "c5", "Output": "polished yet colloquial", "answer": "1"},
        {"Input": "c6", "Output": "0", "answer": "0"},
    ])

    dump("nusax_senti", [
        {"Input": "s1", "Output": "Positive.", "answer": "positif", "lang": "indonesian"},
        {"Input": "s2", "Output": "netral", "answer": "netral", "lang": "javanese"},
        {"Input": "s3", "Output": "negatif", "answer": "negatif", "lang": "acehnese"},
        {"Input": "s4", "Output": "sentimen cenderung negatif", "answer": "negatif",
         "lang": "indonesian"},
        {"Input": "s5", "Output": "senang", "answer": "positif", "lang": "balinese"},
        {"Input": "s6", "Output": "Negative sentiment overall", "answer": "positif",
         "lang": "english"},
    ])
    judge_entries += [
        {"template": "equality", "key": ["sentimen cenderung negatif", "negatif"],
         "response": "Yes"},
        {"template": "equality", "key": ["Negative sentiment overall", "positif"],
         "response": "No"},
    ]

    dump("id_hatespeech", [
        {"Input": "h1", "Output": "1.", "answer": "1"},
        {"Input": "h2", "Output": "0 karena tidak mengandung ujaran", "answer": "1"},
        {"Input": "h3", "Output": "0", "answer": "0"},
        {"Input": "h4", "Output": "bukan ujaran kebencian", "answer": "0"},
        {"Input": "h5", "Output": "1 jelas kasar", "answer": "1"},
    ])
    judge_entries += [
        {"template": "equality", "key": ["bukan ujaran kebencian", "0"], "response": "Yes"},
    ]

    dump("nusax_mt", [
        {"Input": "terjemahkan", "Output": "kami makan nasi di rumah",
         "answer": "kami makan nasi di rumah", "lang": "indonesian"},
        {"Input": "terjemahkan", "Output": "dheweke mangan sekul",
         "answer": "dheweke mangan sega ing omah", "lang": "javanese"},
        {"Input": "terjemahkan", "Output": "cai eta tiis pisan",
         "answer": "cai eta tiis", "lang": "sundanese"},
        {"Input": "terjemahkan", "Output": "xyz", "answer": "bungong jeumpa", "lang": "acehnese"},
    ])

    dump("indosum", [
        {"Input": "ringkas", "Output": "Pemerintah membangun jalan baru di desa.",
         "answer": "Pemerintah membangun jalan baru di desa."},
        {"Input": "ringkas", "Output": "Harga beras naik pekan ini.",
         "answer": "Harga beras naik tajam pekan ini di pasar."},
        {"Input": "ringkas", "Output": "Sekolah dibuka kembali.",
         "answer": "Murid kembali belajar setelah sekolah dibuka."},
    ])

    with open(HERE / "judge_fixtures.json", "w", encoding="utf-8") as fh:
        json.dump({"default": "No", "entries": judge_entries}, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


if __name__ == "__main__":
    make_corpus()
    make_tasks()
    print("fixtures written to", HERE)
