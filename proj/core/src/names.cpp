#include <utility>

#include "honeygraph/attributes.hpp"

namespace honeygraph {

const NameCorpus& NameCorpus::builtin() {
  static const NameCorpus corpus = [] {
    NameCorpus c;
    c.first_names = {
        "Aaron",   "Abigail", "Adam",    "Adrian",  "Aisha",   "Alan",    "Albert",  "Alice",
        "Amelia",  "Amir",    "Andrea",  "Andrew",  "Angela",  "Anna",    "Anthony", "Arjun",
        "Ava",     "Barbara", "Ben",     "Beth",    "Brandon", "Brian",   "Bruno",   "Caleb",
        "Camila",  "Carl",    "Carlos",  "Carmen",  "Carol",   "Catherine", "Charles", "Chloe",
        "Chris",   "Claire",  "Daniel",  "David",   "Deborah", "Dennis",  "Diana",   "Diego",
        "Dmitri",  "Donna",   "Dylan",   "Edward",  "Elena",   "Eli",     "Emily",   "Emma",
        "Eric",    "Ethan",   "Eva",     "Fatima",  "Felix",   "Fiona",   "Frank",   "Gabriel",
        "Gary",    "George",  "Grace",   "Hannah",  "Harold",  "Hassan",  "Helen",   "Henry",
        "Ian",     "Irene",   "Isaac",   "Isabel",  "Jack",    "Jacob",   "James",   "Jane",
        "Jason",   "Jennifer", "Jessica", "John",   "Jonas",   "Jose",    "Julia",   "Karen",
        "Kevin",   "Laura",   "Leo",     "Liam",    "Linda",   "Lucas",   "Lucy",    "Maria",
        "Mark",    "Martin",  "Maya",    "Mei",     "Michael", "Nadia",   "Nathan",  "Nina",
        "Noah",    "Olivia",  "Omar",    "Oscar",   "Patricia", "Paul",   "Peter",   "Priya",
        "Rachel",  "Raj",     "Rebecca", "Robert",  "Rosa",    "Ryan",    "Samuel",  "Sandra",
        "Sara",    "Sean",    "Sofia",   "Stefan",  "Steven",  "Susan",   "Thomas",  "Tom",
        "Victor",  "Wei",     "William", "Yusuf",   "Zoe",
    };
    c.last_names = {
        "Adams",    "Ahmed",    "Allen",    "Alvarez",  "Anderson", "Bailey",   "Baker",
        "Bennett",  "Berg",     "Brooks",   "Brown",    "Campbell", "Carter",   "Castillo",
        "Chen",     "Clark",    "Collins",  "Cook",     "Cooper",   "Cruz",     "Davis",
        "Diaz",     "Dubois",   "Edwards",  "Evans",    "Fischer",  "Flores",   "Foster",
        "Garcia",   "Gomez",    "Gonzalez", "Gray",     "Green",    "Gupta",    "Hall",
        "Hansen",   "Harris",   "Hernandez", "Hill",    "Hoffmann", "Howard",   "Hughes",
        "Ivanov",   "Jackson",  "James",    "Jensen",   "Johnson",  "Jones",    "Kelly",
        "Khan",     "Kim",      "King",     "Kowalski", "Kumar",    "Larsen",   "Lee",
        "Lewis",    "Lopez",    "Martin",   "Martinez", "Meyer",    "Miller",   "Mitchell",
        "Moore",    "Morales",  "Morgan",   "Morris",   "Murphy",   "Nakamura", "Nelson",
        "Nguyen",   "Novak",    "Olsen",    "Ortiz",    "Parker",   "Patel",    "Perez",
        "Peterson", "Phillips", "Price",    "Ramirez",  "Reed",     "Reyes",    "Richardson",
        "Rivera",   "Roberts",  "Robinson", "Rodriguez", "Rossi",   "Sanchez",  "Sato",
        "Schmidt",  "Scott",    "Shah",     "Silva",    "Singh",    "Smith",    "Stewart",
        "Sullivan", "Tanaka",   "Taylor",   "Thomas",   "Thompson", "Torres",   "Turner",
        "Walker",   "Wang",     "Ward",     "Watson",   "White",    "Williams", "Wilson",
        "Wright",   "Young",    "Zhang",
    };
    return c;
  }();
  return corpus;
}

NameCorpus NameCorpus::pairs(std::vector<std::pair<std::string, std::string>> names) {
  NameCorpus c;
  c.paired = true;
  for (auto& [first, last] : names) {
    c.first_names.push_back(std::move(first));
    c.last_names.push_back(std::move(last));
  }
  return c;
}

}  // namespace honeygraph
