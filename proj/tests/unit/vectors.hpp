// Generated by tests/oracle/gen_vectors.py.
#pragma once
#include <cstdint>
#include <vector>
namespace vectors {
inline constexpr const char* kEmptySha256 = "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855";
inline constexpr const char* kLeaf0Abc = "8bc289fdfb4bad08236d31b5082346c101249347f23895e9eda26b95ef33c76f";
inline constexpr const char* kRootABC = "7d873316e656554eef0c876664d91539b15dd95a7fb19df3713800b64b8af667";
inline constexpr const char* kRoot8 = "fd25fa97c84f956c98f018a4c060aec159155fa7bd4435e43d57f27e957ed59f";
inline constexpr const char* kRoot5 = "620af8c46cb0ac425453697ed7fe14c8ed974de946e6a4177fd163993d3520c8";
inline constexpr const char* kTestSeed = "7294d4bf26f8da18129bc729b43b9f54f8a50a458a7d881eef9c19e0c3c2d8f5";
inline const std::vector<std::uint64_t> kChallengeE7K100 = {15, 19, 27, 32, 47, 59, 60, 67, 77, 96};
inline const std::vector<std::uint64_t> kChallengeE0K1024 = {51, 58, 151, 232, 262, 394, 440, 455, 463, 482, 542, 553, 584, 590, 615, 717, 754, 786, 804, 938};
inline constexpr const char* kSalt = "63479ad69a090b258277ec8fba6f99419a2ffb248981510657c944ccd1148e97";
inline constexpr const char* kKeystreamD1 = "cb6e3ab83aa39ab3d1fd2ffffddc26e8296d1250f57f287ad9f15b05ffcd8d701ea513b0a8ab8fed4a2311ab0b787515f78186915b3286e99eae3fe95be947ce41e5ab3b4ca441d9fba1461993e42c67";
inline constexpr const char* kKeystreamD1000 = "2a767e1607f9fb23588f9a52ad209d54fe0a8c5e90d9a8d6b013ac72a47d595448bd5ecc318152ff46e128967c605e9585294ba9887c1c24c7c5de119eec873b7a1e801c7a11cac9b769a21b266137d4";
inline constexpr const char* kPostSeed0 = "a9f8be99933241be42374ec20f14e9b246e20f6f5287e4eb15bc702a8ebb27e1";
inline constexpr const char* kEssentialE3 = "4c60aea6ea093d93d40dd87c683081034d9641b4093c05ba2090e3f39374cf2a";
}  // namespace vectors
